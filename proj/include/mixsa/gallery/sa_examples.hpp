#pragma once

#include <cstddef>

#include "mixsa/core/sa.hpp"

namespace mixsa::gallery {

/// Normal cdf Phi(x | variance).
double normal_cdf(double x, double variance);

/// One noisy observation y = alpha - Phi(x | nu / Z) with Z ~ chi^2_nu,
/// an unbiased draw of alpha - F_nu(x).
double t_quantile_observation(double alpha, double nu, double x, Rng& rng);

/// Robbins-Monro search for the alpha-quantile of t_nu from x0.
/// Throws std::invalid_argument for alpha outside (0, 1) or nu < 1.
core::Trace t_quantile_sa(double alpha, double nu, double x0, const core::WeightSchedule& schedule,
                          std::size_t n, Rng& rng, std::size_t stride = 1);

/// Mean of the last `count` recorded iterates (first coordinate).
double tail_mean(const core::Trace& trace, std::size_t count);

/// Bracketed term of the recursive EB update: 1/x - (Z + 1)/(x + 1).
double eb_observation(double x, long z);

/// Mean drift (xi - x) / (xi x (x + 1)).
double h_eb(double x, double xi);

inline constexpr double kEbLower = 1e-6;
inline constexpr double kEbUpper = 1e6;

/// lambda_i ~ Exp(rate xi_true), Z_i | lambda_i ~ Poisson(lambda_i); iterates
/// are kept in [1e-6, 1e6] and projections are counted in the trace.
core::Trace eb_poisson_exp_sa(double xi_true, double x0, const core::WeightSchedule& schedule,
                              std::size_t n, Rng& rng, std::size_t stride = 1);

/// Draw of Z from the Exp-Poisson hierarchy.
long eb_draw(double xi_true, Rng& rng);

}  // namespace mixsa::gallery
