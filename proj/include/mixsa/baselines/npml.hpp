#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"

namespace mixsa::baselines {

struct EmOptions
{
    std::size_t max_iters = 10000;
    double tol = 1e-8;  ///< stop when the log-likelihood gain falls below this
};

struct NpmlResult
{
    mixture::MixingDensity estimate;
    /// Weighted log-likelihood after each iteration; entry 0 is the start.
    std::vector<double> loglik;
    std::size_t iterations = 0;
    bool converged = false;

    /// Smallest per-step change of the log-likelihood (+inf for no steps).
    double min_increment() const;
};

/// NPML of the mixing density on a fixed grid by EM, from `start`.
/// Each point x_i carries weight a_i (use all ones for plain data).
NpmlResult npml_em_weighted(std::span<const double> x, std::span<const double> a,
                            const mixture::MixingDensity& start, const mixture::Kernel& kernel,
                            const EmOptions& options = {});

/// Plain-data EM from the uniform density on `grid`.
NpmlResult npml_em(std::span<const double> data, const mixture::GridPtr& grid,
                   const mixture::Kernel& kernel, const EmOptions& options = {});

}  // namespace mixsa::baselines
