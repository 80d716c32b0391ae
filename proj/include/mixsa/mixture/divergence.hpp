#pragma once

#include <span>

#include <Eigen/Dense>

#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"
#include "mixsa/mixture/quadrature.hpp"

namespace mixsa::mixture {

/// K(psi, phi) = sum_k psi^k log(psi^k / phi^k) mu_k with 0 log 0 = 0.
/// Returns +inf when psi^k > 0 = phi^k. Grids must match.
double kl_theta(const MixingDensity& psi, const MixingDensity& phi);

/// Quadrature approximation of K(Pi_f, Pi_phi). f and phi may live on
/// different grids; the rule must cover both marginals.
double kl_marginal(const MixingDensity& f, const MixingDensity& phi, const Kernel& kernel,
                   const XQuadrature& q);

/// sum_j w_j a_j log(a_j / b_j) on precomputed marginals, same conventions.
double kl_from_marginals(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                         std::span<const double> weights);

}  // namespace mixsa::mixture
