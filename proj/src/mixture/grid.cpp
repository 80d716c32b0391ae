#include "mixsa/mixture/grid.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace mixsa::mixture {

ThetaGrid::ThetaGrid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights))
{
    if (points_.empty())
    {
        throw std::invalid_argument("ThetaGrid: no points");
    }
    if (points_.size() != weights_.size())
    {
        throw std::invalid_argument("ThetaGrid: points and weights differ in length");
    }
    counting_ = true;
    for (std::size_t k = 0; k < points_.size(); ++k)
    {
        if (!std::isfinite(points_[k]))
        {
            throw std::invalid_argument("ThetaGrid: non-finite point");
        }
        if (k > 0 && !(points_[k] > points_[k - 1]))
        {
            throw std::invalid_argument(
                fmt::format("ThetaGrid: points not strictly increasing at index {}", k));
        }
        if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k]))
        {
            throw std::invalid_argument(
                fmt::format("ThetaGrid: weight {} at index {} is not positive", weights_[k], k));
        }
        counting_ = counting_ && weights_[k] == 1.0;
    }
}

ThetaGrid ThetaGrid::counting(std::vector<double> points)
{
    std::vector<double> w(points.size(), 1.0);
    return ThetaGrid(std::move(points), std::move(w));
}

ThetaGrid ThetaGrid::integers(int lo, int hi)
{
    if (hi < lo)
    {
        throw std::invalid_argument("ThetaGrid::integers: hi < lo");
    }
    std::vector<double> pts;
    for (int t = lo; t <= hi; ++t)
    {
        pts.push_back(t);
    }
    return counting(std::move(pts));
}

ThetaGrid ThetaGrid::trapezoid(double lo, double hi, std::size_t m)
{
    if (m < 2 || !(hi > lo))
    {
        throw std::invalid_argument("ThetaGrid::trapezoid: need m >= 2 and hi > lo");
    }
    const double h = (hi - lo) / static_cast<double>(m - 1);
    std::vector<double> pts(m);
    std::vector<double> w(m, h);
    for (std::size_t k = 0; k < m; ++k)
    {
        pts[k] = lo + h * static_cast<double>(k);
    }
    pts.back() = hi;
    w.front() = w.back() = h / 2.0;
    return ThetaGrid(std::move(pts), std::move(w));
}

std::size_t ThetaGrid::find(double theta) const
{
    for (std::size_t k = 0; k < points_.size(); ++k)
    {
        if (std::abs(points_[k] - theta) <= 1e-12)
        {
            return k;
        }
    }
    return points_.size();
}

MixingDensity::MixingDensity(GridPtr grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (!grid_)
    {
        throw std::invalid_argument("MixingDensity: null grid");
    }
    if (static_cast<std::size_t>(values_.size()) != grid_->size())
    {
        throw std::invalid_argument(fmt::format("MixingDensity: {} values for a {}-point grid",
                                                values_.size(), grid_->size()));
    }
    if (!values_.allFinite() || (values_.array() < 0.0).any())
    {
        throw std::invalid_argument("MixingDensity: values must be finite and nonnegative");
    }
    const double mass = total_mass();
    if (std::abs(mass - 1.0) > mass_tolerance)
    {
        throw std::invalid_argument(
            fmt::format("MixingDensity: total mass {:.17g} differs from 1", mass));
    }
}

MixingDensity MixingDensity::normalized(GridPtr grid, Eigen::VectorXd raw)
{
    if (!grid || static_cast<std::size_t>(raw.size()) != grid->size())
    {
        throw std::invalid_argument("MixingDensity::normalized: size mismatch");
    }
    double mass = 0.0;
    for (Eigen::Index k = 0; k < raw.size(); ++k)
    {
        mass += raw[k] * grid->weight(static_cast<std::size_t>(k));
    }
    if (!(mass > 0.0) || !std::isfinite(mass))
    {
        throw std::invalid_argument("MixingDensity::normalized: total mass is not positive");
    }
    raw /= mass;
    return MixingDensity(std::move(grid), std::move(raw));
}

MixingDensity MixingDensity::uniform(GridPtr grid)
{
    const auto d = static_cast<Eigen::Index>(grid->size());
    return normalized(std::move(grid), Eigen::VectorXd::Ones(d));
}

MixingDensity MixingDensity::point_mass(GridPtr grid, std::size_t k)
{
    if (k >= grid->size())
    {
        throw std::out_of_range("MixingDensity::point_mass: index outside grid");
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
    v[static_cast<Eigen::Index>(k)] = 1.0 / grid->weight(k);
    return MixingDensity(std::move(grid), std::move(v));
}

MixingDensity MixingDensity::binomial(GridPtr grid, int size, double prob)
{
    if (size < 0 || grid->size() != static_cast<std::size_t>(size) + 1 || !(prob >= 0.0) ||
        !(prob <= 1.0))
    {
        throw std::invalid_argument(
            fmt::format("binomial({}, {}) does not fit a {}-point grid", size, prob, grid->size()));
    }
    Eigen::VectorXd v(size + 1);
    for (int j = 0; j <= size; ++j)
    {
        const double log_choose =
            std::lgamma(size + 1.0) - std::lgamma(j + 1.0) - std::lgamma(size - j + 1.0);
        const double pj = std::exp(log_choose + (j == 0 ? 0.0 : j * std::log(prob)) +
                                   (j == size ? 0.0 : (size - j) * std::log1p(-prob)));
        v[j] = pj / grid->weight(static_cast<std::size_t>(j));
    }
    return normalized(std::move(grid), std::move(v));
}

MixingDensity MixingDensity::atoms(GridPtr grid, const std::vector<double>& thetas,
                                   const std::vector<double>& probs)
{
    if (thetas.size() != probs.size() || thetas.empty())
    {
        throw std::invalid_argument("MixingDensity::atoms: thetas and probs differ in length");
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
    for (std::size_t i = 0; i < thetas.size(); ++i)
    {
        const std::size_t k = grid->find(thetas[i]);
        if (k == grid->size())
        {
            throw std::invalid_argument(fmt::format("atom at {} is not a grid point", thetas[i]));
        }
        if (!(probs[i] >= 0.0))
        {
            throw std::invalid_argument("MixingDensity::atoms: negative probability");
        }
        v[static_cast<Eigen::Index>(k)] += probs[i] / grid->weight(k);
    }
    return normalized(std::move(grid), std::move(v));
}

double log_beta_density(double t, double a, double b)
{
    return (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) + std::lgamma(a + b) -
           std::lgamma(a) - std::lgamma(b);
}

MixingDensity MixingDensity::beta(GridPtr grid, double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
    {
        throw std::invalid_argument("MixingDensity::beta: shape parameters must be positive");
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid->size()));
    for (std::size_t k = 0; k < grid->size(); ++k)
    {
        const double t = grid->point(k);
        double value = 0.0;
        if (t > 0.0 && t < 1.0)
        {
            value = std::exp(log_beta_density(t, a, b));
        }
        else if ((t == 0.0 && a == 1.0) || (t == 1.0 && b == 1.0))
        {
            value = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
        }
        else if ((t == 0.0 && a < 1.0) || (t == 1.0 && b < 1.0) || t < 0.0 || t > 1.0)
        {
            throw std::invalid_argument("MixingDensity::beta: density unbounded or undefined on grid");
        }
        v[static_cast<Eigen::Index>(k)] = value;
    }
    return normalized(std::move(grid), std::move(v));
}

Eigen::VectorXd MixingDensity::pmf() const
{
    Eigen::VectorXd p(values_.size());
    for (Eigen::Index k = 0; k < values_.size(); ++k)
    {
        p[k] = values_[k] * grid_->weight(static_cast<std::size_t>(k));
    }
    return p;
}

double MixingDensity::total_mass() const
{
    double mass = 0.0;
    for (Eigen::Index k = 0; k < values_.size(); ++k)
    {
        mass += values_[k] * grid_->weight(static_cast<std::size_t>(k));
    }
    return mass;
}

}  // namespace mixsa::mixture
