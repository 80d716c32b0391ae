#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/csv.hpp"
#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::mixture {

/// n rows of r replicate draws; theta[i] is the latent parameter of row i
/// (kept for oracle checks, never read by estimators).
struct Observations
{
    Eigen::MatrixXd x;
    std::vector<double> theta;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(x.rows()); }
    std::size_t replicates() const noexcept { return static_cast<std::size_t>(x.cols()); }
    /// First column as a flat vector (the r = 1 data stream).
    std::vector<double> first_column() const;
};

using ThetaSampler = std::function<double(Rng&)>;

/// Draws theta from the point masses f^k mu_k.
ThetaSampler grid_sampler(const MixingDensity& f);

/// Draws theta from a finite mixture of Beta densities on [0, 1].
ThetaSampler beta_mixture_sampler(std::vector<double> weights, std::vector<double> a,
                                  std::vector<double> b);

Observations sample_mixture(const ThetaSampler& theta, const Kernel& kernel, Rng& rng,
                            std::size_t n, std::size_t r = 1);
Observations sample_mixture(const MixingDensity& f, const Kernel& kernel, Rng& rng, std::size_t n,
                            std::size_t r = 1);

/// Dataset CSV: rep_id,row_id,x_1..x_r[,theta_latent].
CsvTable dataset_table(const Observations& obs, std::size_t rep_id, bool with_latent = true);
/// Reads rows of one replication (all rows when rep_id is negative). The
/// latent column, if present, is ignored.
Observations read_dataset(const CsvTable& table, long rep_id = -1);

/// Mixing density CSV: theta,value.
CsvTable density_table(const MixingDensity& f);

}  // namespace mixsa::mixture
