#include "mixsa/core/constraint.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace mixsa::core {

ConstraintSet ConstraintSet::unconstrained()
{
    const double inf = std::numeric_limits<double>::infinity();
    return ConstraintSet(Kind::unconstrained, -inf, inf);
}

ConstraintSet ConstraintSet::box(double lo, double hi)
{
    if (!(lo <= hi))
    {
        throw std::invalid_argument(fmt::format("box constraint: lo={} exceeds hi={}", lo, hi));
    }
    return ConstraintSet(Kind::box, lo, hi);
}

ConstraintSet ConstraintSet::floored_simplex(double floor)
{
    if (!(floor >= 0.0) || !std::isfinite(floor))
    {
        throw std::invalid_argument(fmt::format("floored simplex: floor={} must be >= 0", floor));
    }
    return ConstraintSet(Kind::floored_simplex, floor, 1.0);
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& x)
{
    const Eigen::Index d = x.size();
    if (d == 0)
    {
        throw std::invalid_argument("simplex projection of an empty vector");
    }
    std::vector<double> sorted(x.data(), x.data() + d);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    double cumulative = 0.0;
    double tau = 0.0;
    for (Eigen::Index k = 0; k < d; ++k)
    {
        cumulative += sorted[static_cast<std::size_t>(k)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0)
        {
            tau = candidate;
        }
    }
    return (x.array() - tau).max(0.0).matrix();
}

Eigen::VectorXd ConstraintSet::project(const Eigen::VectorXd& x) const
{
    switch (kind_)
    {
    case Kind::unconstrained:
        return x;
    case Kind::box:
        return x.cwiseMax(lo_).cwiseMin(hi_);
    case Kind::floored_simplex: {
        const auto d = static_cast<double>(x.size());
        const double mass = 1.0 - d * lo_;
        if (!(mass > 0.0))
        {
            throw std::invalid_argument(fmt::format(
                "floored simplex: d * floor = {} must be < 1 (d={}, floor={})", d * lo_, x.size(),
                lo_));
        }
        if (contains(x))
        {
            return x;
        }
        // x = floor + mass * psi with psi on the unit simplex.
        const Eigen::VectorXd psi = project_to_simplex(((x.array() - lo_) / mass).matrix());
        return (lo_ + mass * psi.array()).matrix();
    }
    }
    return x;
}

bool ConstraintSet::contains(const Eigen::VectorXd& x, double sum_tol) const
{
    if (!x.allFinite())
    {
        return false;
    }
    switch (kind_)
    {
    case Kind::unconstrained:
        return true;
    case Kind::box:
        return (x.array() >= lo_).all() && (x.array() <= hi_).all();
    case Kind::floored_simplex:
        return (x.array() >= lo_).all() && std::abs(x.sum() - 1.0) <= sum_tol;
    }
    return false;
}

}  // namespace mixsa::core
