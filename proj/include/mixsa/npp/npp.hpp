#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/core/constraint.hpp"
#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/mixture/grid.hpp"

namespace mixsa::npp {

using mixture::MixingDensity;

/// One replicated observation row (r >= 2) with its sufficient statistics.
struct ReplicateRow
{
    std::vector<double> x;
    double mean = 0.0;
    /// Within-row sum of squares sum_j (x_j - mean)^2.
    double ss = 0.0;

    static ReplicateRow from(std::span<const double> values);
    std::size_t r() const noexcept { return x.size(); }
    /// Unbiased sample variance ss / (r - 1).
    double sample_variance() const;
};

std::vector<ReplicateRow> rows_from_matrix(const Eigen::MatrixXd& x);

/// xi_i = ((i - 1) xi_{i-1} + s_i^2) / i with s_i^2 the row's sample variance.
double ube_update(double prev_xi, std::size_t i, const ReplicateRow& row);

/// Posterior mean of sigma^2 under p(sigma^2) ~ 1/sigma^2:
/// pooled_ss / (i (r - 1) - 2). Throws std::domain_error when i (r - 1) <= 2.
double bayes_update(std::size_t i, double pooled_ss, std::size_t r);

/// H_k(x, phi, psi) from the joint normal density of the full row.
Eigen::VectorXd H_rep(const ReplicateRow& row, const MixingDensity& phi, double psi);

/// Same map through the sufficient statistic s = row mean, whose density
/// is N(theta, psi / r). Evaluated in the log domain.
Eigen::VectorXd H_suff(double s, const MixingDensity& phi, double psi, std::size_t r);

enum class VarianceEstimator
{
    ube,    ///< recursive sample-variance average
    bayes,  ///< pooled posterior mean; UBE during warm-up while i (r - 1) <= 2
    known,  ///< fixed at NppConfig::known_xi (plain Newton on the row means)
};

struct NppConfig
{
    double floor = 1e-4;
    double xi_lo = 1e-4;
    double xi_hi = 1e4;
    double xi0 = 1.0;
    VarianceEstimator estimator = VarianceEstimator::ube;
    double known_xi = 1.0;
};

struct NPState
{
    std::size_t n = 0;
    MixingDensity f;
    double xi = 1.0;
    /// sum over processed rows of the within-row sum of squares.
    double pooled_ss = 0.0;
    std::size_t proj_simplex = 0;
    std::size_t proj_box = 0;
};

NPState initial_state(const MixingDensity& f0, const NppConfig& config);

/// xi is updated first (and box-projected); f is then moved with the new
/// xi and projected onto the floored simplex. Projection events are counted.
NPState npp_step(const NPState& state, const ReplicateRow& row, double w, const NppConfig& config);

struct NppTraceRow
{
    std::size_t n = 0;
    double xi = 0.0;
    Eigen::VectorXd f;
    std::size_t proj_simplex = 0;
    std::size_t proj_box = 0;
};

struct NppRun
{
    NPState final;
    std::vector<NppTraceRow> trace;
    /// False for the Bayes variant, which needs the pooled sum of squares
    /// on top of (f_n, xi_n).
    bool recursive = true;
};

/// K(Pi, Pi_hat) between the marginals of the row mean, Pi(s) = sum_k
/// N(s | theta_k, xi / r) f^k mu_k, under (f, xi) and (f_hat, xi_hat).
/// Both densities must share a grid.
double kl_row_mean(const MixingDensity& f, double xi, const MixingDensity& f_hat, double xi_hat,
                   std::size_t r);

NppRun run_npp(std::span<const ReplicateRow> rows, const MixingDensity& f0,
               const core::WeightSchedule& schedule, const NppConfig& config,
               std::size_t stride = 0);

}  // namespace mixsa::npp
