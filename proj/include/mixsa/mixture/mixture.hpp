#pragma once

#include <Eigen/Dense>

#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"
#include "mixsa/mixture/quadrature.hpp"

namespace mixsa::mixture {

/// Pi_phi(x) = sum_k p(x | theta_k) phi^k mu_k.
double marginal(const MixingDensity& phi, const Kernel& kernel, double x);

/// Posterior of theta given x under prior phi, as a density on the same grid.
/// Computed in the log domain; throws NumericError when every term
/// p(x | theta_k) phi^k vanishes.
MixingDensity posterior(const MixingDensity& phi, const Kernel& kernel, double x);

/// Posterior values from precomputed log p(x | theta_k).
Eigen::VectorXd posterior_values(const MixingDensity& phi, const Eigen::VectorXd& log_lik);

/// Pi_phi at every quadrature node, given likelihood_matrix(kernel, grid, q).
Eigen::VectorXd marginal_on_nodes(const MixingDensity& phi, const Eigen::MatrixXd& lik);

/// Quadrature of Pi_f over the sample space (should be 1).
double quadrature_mass(const MixingDensity& f, const Kernel& kernel, const XQuadrature& q);

}  // namespace mixsa::mixture
