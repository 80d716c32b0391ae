#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/newton/newton.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::newton {

/// Simulates n_chains copies of the chain Z_0 ~ f_0,
/// Z_i = Z_{i-1} w.p. 1 - w_i, else a draw from the posterior of f_{i-1}
/// given X_i, over the whole prefix. Returns the empirical pmf of Z_n on
/// the grid (point masses, not densities). Counting-measure semantics: the
/// pmf is compared with f_n mu.
Eigen::VectorXd markov_marginal_sample(std::span<const double> prefix, const MixingDensity& f0,
                                       const core::WeightSchedule& schedule, const Kernel& kernel,
                                       Rng& rng, std::size_t n_chains);

/// Total-variation distance between two pmfs.
double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace mixsa::newton
