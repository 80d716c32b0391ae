#pragma once

#include <Eigen/Dense>

#include "mixsa/newton/newton.hpp"

namespace mixsa::newton {

/// Diagnostics of l(phi) = K(f, phi) as a Lyapunov function of the mean
/// ODE dphi/dt = h(phi). Counting measure on Theta is assumed.
struct LyapunovReport
{
    double value = 0.0;            ///< l(phi)
    Eigen::VectorXd gradient;      ///< see lyapunov_gradient
    double time_derivative = 0.0;  ///< 1 - int Pi_f^2 / Pi_phi
    /// Jensen upper bound 1 - 1 / int Pi_phi minus the time derivative (>= 0).
    double jensen_slack = 0.0;
};

/// Gradient of l with the positive coordinates of f first: -r + r^s 1_s,
/// r^k = f^k / phi^k, s = number of positive f^k, 1_s the indicator of
/// those coordinates. Derivative in the reduced coordinates that hold the
/// mass on supp(f) fixed; for interior f, every tangent direction.
/// Throws std::invalid_argument when phi^k = 0 < f^k.
Eigen::VectorXd lyapunov_gradient(const MixingDensity& f_true, const MixingDensity& phi);

/// 1 - int (Pi_f / Pi_phi) Pi_f over the quadrature.
double lyapunov_time_derivative(const MeanField& model, const MixingDensity& phi);
double lyapunov_time_derivative(const MixingDensity& f_true, const MixingDensity& phi,
                                const Kernel& kernel, const XQuadrature& q);

LyapunovReport lyapunov_report(const MeanField& model, const MixingDensity& phi);

}  // namespace mixsa::newton
