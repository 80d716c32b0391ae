#include "mixsa/mixture/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace mixsa::mixture {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

}  // namespace

Kernel Kernel::normal(double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
    {
        throw std::invalid_argument(fmt::format("normal kernel: sigma={} must be positive", sigma));
    }
    Kernel k;
    k.family_ = Family::normal_location;
    k.sigma_ = sigma;
    return k;
}

Kernel Kernel::poisson()
{
    Kernel k;
    k.family_ = Family::poisson;
    return k;
}

Kernel Kernel::tabulated(std::vector<double> support, std::vector<double> thetas,
                         std::vector<std::vector<double>> rows)
{
    if (support.empty() || thetas.empty() || rows.size() != thetas.size())
    {
        throw std::invalid_argument("tabulated kernel: need one row per theta and a nonempty support");
    }
    for (std::size_t j = 0; j < rows.size(); ++j)
    {
        if (rows[j].size() != support.size())
        {
            throw std::invalid_argument(
                fmt::format("tabulated kernel: row {} has {} entries, support has {}", j,
                            rows[j].size(), support.size()));
        }
        double total = 0.0;
        for (double p : rows[j])
        {
            if (!(p >= 0.0) || !std::isfinite(p))
            {
                throw std::invalid_argument(fmt::format("tabulated kernel: invalid entry in row {}", j));
            }
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-6)
        {
            throw std::invalid_argument(fmt::format(
                "tabulated kernel: row for theta={} sums to {}, not a density", thetas[j], total));
        }
    }
    Kernel k;
    k.family_ = Family::tabulated;
    k.support_ = std::move(support);
    k.thetas_ = std::move(thetas);
    k.rows_ = std::move(rows);
    return k;
}

Kernel::SampleSpace Kernel::sample_space() const noexcept
{
    switch (family_)
    {
    case Family::normal_location:
        return SampleSpace::real_line;
    case Family::poisson:
        return SampleSpace::nonnegative_integers;
    case Family::tabulated:
        return SampleSpace::finite_set;
    }
    return SampleSpace::real_line;
}

std::size_t Kernel::support_index(double x) const
{
    for (std::size_t i = 0; i < support_.size(); ++i)
    {
        if (support_[i] == x)
        {
            return i;
        }
    }
    return support_.size();
}

std::size_t Kernel::theta_index(double theta) const
{
    for (std::size_t j = 0; j < thetas_.size(); ++j)
    {
        if (std::abs(thetas_[j] - theta) <= 1e-12)
        {
            return j;
        }
    }
    throw std::invalid_argument(fmt::format("tabulated kernel: no row for theta={}", theta));
}

bool Kernel::in_space(double x) const
{
    switch (family_)
    {
    case Family::normal_location:
        return std::isfinite(x);
    case Family::poisson:
        return x >= 0.0 && std::floor(x) == x && std::isfinite(x);
    case Family::tabulated:
        return support_index(x) < support_.size();
    }
    return false;
}

double Kernel::log_density(double x, double theta) const
{
    if (!in_space(x))
    {
        throw std::invalid_argument(fmt::format("x={} outside the sample space of {}", x, describe()));
    }
    switch (family_)
    {
    case Family::normal_location: {
        const double z = (x - theta) / sigma_;
        return -0.5 * z * z - std::log(sigma_) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    case Family::poisson:
        if (theta < 0.0)
        {
            throw std::invalid_argument("poisson kernel: negative mean");
        }
        if (theta == 0.0)
        {
            return x == 0.0 ? 0.0 : neg_inf;
        }
        return x * std::log(theta) - theta - std::lgamma(x + 1.0);
    case Family::tabulated: {
        const double p = rows_[theta_index(theta)][support_index(x)];
        return p > 0.0 ? std::log(p) : neg_inf;
    }
    }
    return neg_inf;
}

double Kernel::density(double x, double theta) const
{
    if (family_ == Family::tabulated)
    {
        if (!in_space(x))
        {
            throw std::invalid_argument(
                fmt::format("x={} outside the sample space of {}", x, describe()));
        }
        return rows_[theta_index(theta)][support_index(x)];
    }
    return std::exp(log_density(x, theta));
}

Eigen::VectorXd Kernel::log_likelihoods(double x, const ThetaGrid& grid) const
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        out[static_cast<Eigen::Index>(k)] = log_density(x, grid.point(k));
    }
    return out;
}

Eigen::VectorXd Kernel::likelihoods(double x, const ThetaGrid& grid) const
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k)
    {
        out[static_cast<Eigen::Index>(k)] = density(x, grid.point(k));
    }
    return out;
}

double Kernel::sample(double theta, Rng& rng) const
{
    switch (family_)
    {
    case Family::normal_location:
        return std::normal_distribution<double>(theta, sigma_)(rng);
    case Family::poisson:
        return theta > 0.0 ? static_cast<double>(std::poisson_distribution<long>(theta)(rng)) : 0.0;
    case Family::tabulated: {
        const auto& row = rows_[theta_index(theta)];
        std::discrete_distribution<std::size_t> pick(row.begin(), row.end());
        return support_[pick(rng)];
    }
    }
    return 0.0;
}

std::string Kernel::describe() const
{
    switch (family_)
    {
    case Family::normal_location:
        return fmt::format("normal(sigma={})", sigma_);
    case Family::poisson:
        return "poisson";
    case Family::tabulated:
        return fmt::format("tabulated({} x-values, {} thetas)", support_.size(), thetas_.size());
    }
    return {};
}

}  // namespace mixsa::mixture
