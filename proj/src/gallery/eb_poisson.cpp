#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/gallery/sa_examples.hpp"

namespace mixsa::gallery {

double eb_observation(double x, long z)
{
    return 1.0 / x - (static_cast<double>(z) + 1.0) / (x + 1.0);
}

double h_eb(double x, double xi)
{
    return (xi - x) / (xi * x * (x + 1.0));
}

long eb_draw(double xi_true, Rng& rng)
{
    std::exponential_distribution<double> exp_dist(xi_true);
    const double lambda = exp_dist(rng);
    if (!(lambda > 0.0))
    {
        return 0;
    }
    std::poisson_distribution<long> poisson(lambda);
    return poisson(rng);
}

core::Trace eb_poisson_exp_sa(double xi_true, double x0, const core::WeightSchedule& schedule,
                              std::size_t n, Rng& rng, std::size_t stride)
{
    if (!(xi_true > 0.0) || !(x0 > 0.0))
    {
        throw std::invalid_argument(
            fmt::format("eb_poisson_exp_sa: xi={} and x0={} must be positive", xi_true, x0));
    }
    const core::Observer observe = [xi_true](std::size_t, const Eigen::VectorXd& x, Rng& g) {
        return Eigen::VectorXd::Constant(1, eb_observation(x[0], eb_draw(xi_true, g)));
    };
    return core::run_sa(Eigen::VectorXd::Constant(1, x0), schedule, observe,
                        core::ConstraintSet::box(kEbLower, kEbUpper), n, rng, stride);
}

}  // namespace mixsa::gallery
