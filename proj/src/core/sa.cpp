#include "mixsa/core/sa.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"

namespace mixsa::core {

StepResult sa_step(const SAState& state, const Eigen::VectorXd& y, double w,
                   const ConstraintSet& c)
{
    if (y.size() != state.x.size())
    {
        throw std::invalid_argument(fmt::format("sa_step: observation has dimension {}, iterate {}",
                                                y.size(), state.x.size()));
    }
    if (!(w > 0.0) || !(w <= 1.0))
    {
        throw std::invalid_argument(fmt::format("sa_step: weight {} outside (0, 1]", w));
    }
    if (!y.allFinite())
    {
        throw NumericError("core_sa", "non-finite observation y refused");
    }
    const Eigen::VectorXd raw = state.x + w * y;
    StepResult out;
    out.state.n = state.n + 1;
    out.state.x = c.project(raw);
    out.z = (out.state.x - raw) / w;
    out.projected = !(out.state.x.array() == raw.array()).all();
    return out;
}

Trace run_sa(const Eigen::VectorXd& initial, const WeightSchedule& schedule,
             const Observer& observe, const ConstraintSet& c, std::size_t n_iters, Rng& rng,
             std::size_t stride)
{
    if (n_iters < 1)
    {
        throw std::invalid_argument("run_sa: n_iters must be >= 1");
    }
    if (stride < 1)
    {
        stride = 1;
    }
    Trace trace;
    SAState state{0, c.project(initial)};
    trace.n.push_back(0);
    trace.x.push_back(state.x);
    trace.z.push_back(Eigen::VectorXd::Zero(state.x.size()));

    for (std::size_t i = 1; i <= n_iters; ++i)
    {
        const Eigen::VectorXd y = observe(i, state.x, rng);
        StepResult step;
        try
        {
            step = sa_step(state, y, schedule(i), c);
        }
        catch (const NumericError& e)
        {
            throw e.at_iteration(i);
        }
        trace.max_sq_norm_y = std::max(trace.max_sq_norm_y, y.squaredNorm());
        trace.projections += step.projected ? 1 : 0;
        state = std::move(step.state);
        if (i % stride == 0 || i == n_iters)
        {
            trace.n.push_back(i);
            trace.x.push_back(state.x);
            trace.z.push_back(step.z);
        }
    }
    return trace;
}

}  // namespace mixsa::core
