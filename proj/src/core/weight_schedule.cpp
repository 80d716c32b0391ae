#include "mixsa/core/weight_schedule.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mixsa::core {

WeightSchedule WeightSchedule::harmonic()
{
    return WeightSchedule(Kind::harmonic, 1.0, 1.0);
}

WeightSchedule WeightSchedule::power(double a, double gamma)
{
    if (!(a > 0.0) || !(a <= 1.0))
    {
        throw std::invalid_argument(
            fmt::format("power schedule: scale a={} must lie in (0, 1] so that w_1 <= 1", a));
    }
    if (!(gamma > 0.5) || !(gamma <= 1.0))
    {
        throw std::invalid_argument(fmt::format(
            "power schedule: exponent gamma={} must lie in (0.5, 1]; gamma <= 0.5 makes "
            "sum w_n^2 diverge, gamma > 1 makes sum w_n converge",
            gamma));
    }
    return WeightSchedule(Kind::power, a, gamma);
}

WeightSchedule WeightSchedule::plateau(double w0, double n0)
{
    if (!(w0 > 0.0) || !(w0 <= 1.0))
    {
        throw std::invalid_argument(fmt::format("plateau schedule: w0={} must lie in (0, 1]", w0));
    }
    if (!(n0 > 0.0) || !std::isfinite(n0))
    {
        throw std::invalid_argument(fmt::format("plateau schedule: n0={} must be positive", n0));
    }
    return WeightSchedule(Kind::plateau, w0, n0);
}

WeightSchedule WeightSchedule::table(std::vector<double> values)
{
    if (values.empty())
    {
        throw std::invalid_argument("table schedule: no values");
    }
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (!(values[i] > 0.0) || !(values[i] <= 1.0))
        {
            throw std::invalid_argument(
                fmt::format("table schedule: w_{}={} outside (0, 1]", i + 1, values[i]));
        }
    }
    WeightSchedule s(Kind::table, 1.0, 1.0);
    s.table_ = std::move(values);
    return s;
}

double WeightSchedule::operator()(std::size_t n) const
{
    if (n == 0)
    {
        throw std::invalid_argument("weight schedule is indexed from n = 1");
    }
    const auto dn = static_cast<double>(n);
    switch (kind_)
    {
    case Kind::harmonic:
        return 1.0 / (dn + 1.0);
    case Kind::power:
        return gamma_ == 1.0 ? a_ / dn : a_ * std::pow(dn, -gamma_);
    case Kind::plateau:
        return std::min(a_, gamma_ / dn);
    case Kind::table:
        if (n > table_.size())
        {
            throw std::out_of_range(
                fmt::format("table schedule has {} entries, w_{} requested", table_.size(), n));
        }
        return table_[n - 1];
    }
    return 0.0;
}

std::string WeightSchedule::describe() const
{
    switch (kind_)
    {
    case Kind::harmonic:
        return "harmonic";
    case Kind::power:
        return fmt::format("power(a={},gamma={})", a_, gamma_);
    case Kind::plateau:
        return fmt::format("plateau(w0={},n0={})", a_, gamma_);
    case Kind::table:
        return fmt::format("table({})", table_.size());
    }
    return {};
}

}  // namespace mixsa::core
