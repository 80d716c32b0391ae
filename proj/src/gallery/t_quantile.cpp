#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/gallery/sa_examples.hpp"

namespace mixsa::gallery {

double normal_cdf(double x, double variance)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0 * variance));
}

double t_quantile_observation(double alpha, double nu, double x, Rng& rng)
{
    std::chi_squared_distribution<double> chi2(nu);
    const double z = chi2(rng);
    return alpha - normal_cdf(x, nu / z);
}

core::Trace t_quantile_sa(double alpha, double nu, double x0, const core::WeightSchedule& schedule,
                          std::size_t n, Rng& rng, std::size_t stride)
{
    if (!(alpha > 0.0 && alpha < 1.0))
    {
        throw std::invalid_argument(fmt::format("t_quantile_sa: alpha={} outside (0, 1)", alpha));
    }
    if (!(nu >= 1.0))
    {
        throw std::invalid_argument(fmt::format("t_quantile_sa: nu={} must be >= 1", nu));
    }
    const core::Observer observe = [alpha, nu](std::size_t, const Eigen::VectorXd& x, Rng& g) {
        return Eigen::VectorXd::Constant(1, t_quantile_observation(alpha, nu, x[0], g));
    };
    return core::run_sa(Eigen::VectorXd::Constant(1, x0), schedule, observe,
                        core::ConstraintSet::unconstrained(), n, rng, stride);
}

double tail_mean(const core::Trace& trace, std::size_t count)
{
    if (count == 0 || trace.x.empty())
    {
        throw std::invalid_argument("tail_mean: nothing to average");
    }
    count = std::min(count, trace.x.size());
    double sum = 0.0;
    for (std::size_t i = trace.x.size() - count; i < trace.x.size(); ++i)
    {
        sum += trace.x[i][0];
    }
    return sum / static_cast<double>(count);
}

}  // namespace mixsa::gallery
