#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/core/constraint.hpp"
#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::core {

/// Iterate of a projected Robbins-Monro recursion.
struct SAState
{
    std::size_t n = 0;
    Eigen::VectorXd x;
};

struct StepResult
{
    SAState state;
    /// Projection correction: x_n = x_{n-1} + w (y + z).
    Eigen::VectorXd z;
    bool projected = false;
};

/// One step x_n = Proj(x_{n-1} + w y). Throws NumericError for non-finite y
/// and std::invalid_argument for w outside (0, 1] or a dimension mismatch.
StepResult sa_step(const SAState& state, const Eigen::VectorXd& y, double w,
                   const ConstraintSet& c);

struct Trace
{
    std::vector<std::size_t> n;
    std::vector<Eigen::VectorXd> x;
    std::vector<Eigen::VectorXd> z;
    /// SA1 monitor: running max of |y_n|^2 over the run.
    double max_sq_norm_y = 0.0;
    std::size_t projections = 0;

    const Eigen::VectorXd& final() const { return x.back(); }
};

/// Produces y_n from the iteration index and the previous iterate.
using Observer =
    std::function<Eigen::VectorXd(std::size_t n, const Eigen::VectorXd& x_prev, Rng& rng)>;

/// Runs n_iters steps from `initial` (recorded as n = 0). The trace keeps
/// every `stride`-th iterate plus the last one.
Trace run_sa(const Eigen::VectorXd& initial, const WeightSchedule& schedule,
             const Observer& observe, const ConstraintSet& c, std::size_t n_iters, Rng& rng,
             std::size_t stride = 1);

}  // namespace mixsa::core
