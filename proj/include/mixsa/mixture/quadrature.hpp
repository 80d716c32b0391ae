#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"

namespace mixsa::mixture {

/// Nodes and weights for integrals over the sample space.
struct XQuadrature
{
    enum class Kind
    {
        finite_sum,
        trapezoid,
    };

    Kind kind = Kind::finite_sum;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Rule matched to the kernel family:
///  - normal: trapezoid on [theta_1 - 8 sigma, theta_d + 8 sigma], spacing sigma / 20;
///  - poisson: unit-weight sum over 0..K with tail mass below 1e-12 at theta_d;
///  - tabulated: exact sum over the finite support.
XQuadrature quadrature_for(const Kernel& kernel, const ThetaGrid& grid);

/// Uniform trapezoid rule on [lo, hi] with the given spacing (the last
/// panel is shortened so that hi is a node).
XQuadrature trapezoid_rule(double lo, double hi, double spacing);

/// p(x_j | theta_k) at every quadrature node: rows are nodes, columns grid points.
Eigen::MatrixXd likelihood_matrix(const Kernel& kernel, const ThetaGrid& grid,
                                  const XQuadrature& q);

/// max_k |sum_j w_j p(x_j | theta_k) - 1|.
double kernel_normalization_error(const Kernel& kernel, const ThetaGrid& grid,
                                  const XQuadrature& q);

}  // namespace mixsa::mixture
