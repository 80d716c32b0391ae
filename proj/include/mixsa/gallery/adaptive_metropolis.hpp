#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::gallery {

/// Unnormalized log target density.
using LogTarget = std::function<double(const Eigen::VectorXd&)>;

inline constexpr double kAmEpsilon = 1e-8;

struct AMState
{
    std::size_t n = 0;
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    Eigen::VectorXd z;
    double log_target_z = 0.0;
    double c = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected_nonfinite = 0;
};

/// c = 2.4^2 / d.
double am_default_scale(std::size_t d);

/// Starting state; throws std::invalid_argument on mismatched sizes or a
/// non-finite target value at z0.
AMState am_initial(const LogTarget& target, Eigen::VectorXd z0, Eigen::VectorXd mu0,
                   Eigen::MatrixXd sigma0, double c = 0.0);

/// Sigma <- (1-w) Sigma + w (z - mu)(z - mu)', then mu <- (1-w) mu + w z.
/// The covariance update uses the previous mean.
void am_moment_update(Eigen::VectorXd& mu, Eigen::MatrixXd& sigma, const Eigen::VectorXd& z,
                      double w);

/// One Metropolis move with proposal N(z, c Sigma + eps I) followed by the
/// moment update with the post-move position.
void am_step(AMState& state, const LogTarget& target, double w, Rng& rng);

struct AMTraceRow
{
    std::size_t n;
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;
    double acceptance;
};

struct AMRun
{
    AMState final;
    std::vector<AMTraceRow> trace;
};

/// Default schedule is harmonic, so the initial moments keep weight
/// 1/(n+1) and the proposal never collapses.
AMRun run_am(const LogTarget& target, AMState initial, const core::WeightSchedule& schedule,
             std::size_t n, Rng& rng, std::size_t stride = 1000);

}  // namespace mixsa::gallery
