#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::baselines {

/// Dirichlet process D(alpha, f0) over a finite grid.
struct DPPrior
{
    DPPrior(double alpha, mixture::MixingDensity f0);

    double alpha;
    mixture::MixingDensity f0;
};

/// E[G | x] for G ~ D(alpha, f0), x | theta ~ p, theta | G ~ G:
/// alpha/(alpha+1) f0 + 1/(alpha+1) posterior(f0, x).
mixture::MixingDensity dpp_one_step_posterior_mean(double x, const DPPrior& prior,
                                                   const mixture::Kernel& kernel);

inline constexpr std::size_t kMaxEnumerationSize = 8;

/// Exact E[G | x_1..x_n] by summing over all d^n latent assignments with
/// Polya-urn prior weights. Requires n <= 8 and d^n <= 1e8.
mixture::MixingDensity npb_exact_enumeration(std::span<const double> data, const DPPrior& prior,
                                             const mixture::Kernel& kernel);

struct SisOptions
{
    std::size_t particles = 1000;
    bool resample = false;  ///< multinomial resampling when ESS < N/2
};

struct SisResult
{
    mixture::MixingDensity estimate;
    /// Per-coordinate standard error of the self-normalized estimate.
    Eigen::VectorXd standard_error;
    double ess = 0.0;
    std::size_t resamplings = 0;
};

/// Sequential imputation: each particle extends its assignment by the urn
/// predictive weighted by p(x_i | theta), and its log weight accumulates the
/// predictive density of x_i. The estimate averages the per-particle
/// posterior means (alpha f0 + counts) / (alpha + n).
SisResult npb_sequential_imputation(std::span<const double> data, const DPPrior& prior,
                                    const mixture::Kernel& kernel, const SisOptions& options,
                                    Rng& rng);

}  // namespace mixsa::baselines
