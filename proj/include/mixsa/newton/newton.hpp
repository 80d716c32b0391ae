#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"
#include "mixsa/mixture/quadrature.hpp"

namespace mixsa::newton {

using mixture::Kernel;
using mixture::MixingDensity;
using mixture::XQuadrature;

/// H_k(x, phi) = p(x | theta_k) phi^k / Pi_phi(x) - phi^k. Components
/// integrate to zero under mu.
Eigen::VectorXd H_map(double x, const MixingDensity& phi, const Kernel& kernel);

/// One recursive step f_prev + w H(x, f_prev), i.e. the convex combination
/// (1 - w) f_prev + w posterior(f_prev, x). w must lie in (0, 1].
MixingDensity newton_update(const MixingDensity& f_prev, double x, double w, const Kernel& kernel);

/// Binds a true mixing density, kernel and quadrature so that the
/// mean-field maps can be evaluated repeatedly without recomputing the
/// likelihood matrix. phi must live on f's grid.
class MeanField
{
public:
    MeanField(MixingDensity f_true, Kernel kernel, XQuadrature q);

    /// T(phi)^k = int Pi_f / Pi_phi p(x | theta_k) phi^k dx.
    Eigen::VectorXd T_values(const MixingDensity& phi) const;
    /// h(phi) = T(phi) - phi.
    Eigen::VectorXd h(const MixingDensity& phi) const;
    MixingDensity T(const MixingDensity& phi) const;

    /// Pi_f and Pi_phi at the quadrature nodes.
    const Eigen::VectorXd& true_marginal() const noexcept { return pi_f_; }
    Eigen::VectorXd marginal(const MixingDensity& phi) const;
    double kl_marginal(const MixingDensity& phi) const;

    const MixingDensity& truth() const noexcept { return f_; }
    const Kernel& kernel() const noexcept { return kernel_; }
    const XQuadrature& quadrature() const noexcept { return q_; }
    const Eigen::MatrixXd& likelihoods() const noexcept { return lik_; }

private:
    MixingDensity f_;
    Kernel kernel_;
    XQuadrature q_;
    Eigen::MatrixXd lik_;
    Eigen::VectorXd pi_f_;
};

Eigen::VectorXd h_map(const MixingDensity& phi, const MixingDensity& f_true, const Kernel& kernel,
                      const XQuadrature& q);
MixingDensity T_map(const MixingDensity& phi, const MixingDensity& f_true, const Kernel& kernel,
                    const XQuadrature& q);

struct NewtonTraceRow
{
    std::size_t n = 0;
    Eigen::VectorXd f;
    double kl_theta = 0.0;     // NaN when no truth on the same grid
    double kl_marginal = 0.0;  // NaN when no truth
};

struct NewtonOptions
{
    /// Record every stride-th iterate (plus n = 0 and the final one); 0 keeps
    /// only the final estimate.
    std::size_t stride = 0;
    /// When set, trace rows carry K(f, f_n) and K(Pi_f, Pi_{f_n}).
    const MeanField* truth = nullptr;
};

struct NewtonRun
{
    MixingDensity estimate;
    std::vector<NewtonTraceRow> trace;
    std::string schedule;
    /// FNV-1a hash of the data in processing order; the estimate depends on it.
    std::uint64_t order_hash = 0;
};

/// Processes data once, in the given order.
NewtonRun run_newton(std::span<const double> data, const MixingDensity& f0,
                     const core::WeightSchedule& schedule, const Kernel& kernel,
                     const NewtonOptions& options = {});

std::uint64_t order_hash(std::span<const double> data);

}  // namespace mixsa::newton
