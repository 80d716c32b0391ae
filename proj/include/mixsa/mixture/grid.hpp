#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace mixsa::mixture {

/// Support points theta_1 < ... < theta_d with positive measure weights:
/// all ones for counting measure, trapezoid weights for a gridded interval.
class ThetaGrid
{
public:
    ThetaGrid(std::vector<double> points, std::vector<double> weights);

    static ThetaGrid counting(std::vector<double> points);
    /// Integers lo, lo+1, ..., hi under counting measure.
    static ThetaGrid integers(int lo, int hi);
    /// m equally spaced points on [lo, hi] with trapezoid weights.
    static ThetaGrid trapezoid(double lo, double hi, std::size_t m);

    std::size_t size() const noexcept { return points_.size(); }
    double point(std::size_t k) const { return points_[k]; }
    double weight(std::size_t k) const { return weights_[k]; }
    const std::vector<double>& points() const noexcept { return points_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    bool is_counting() const noexcept { return counting_; }

    /// Index of the point equal to theta within 1e-12, or size() if absent.
    std::size_t find(double theta) const;

    bool operator==(const ThetaGrid& other) const
    {
        return points_ == other.points_ && weights_ == other.weights_;
    }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
    bool counting_ = false;
};

using GridPtr = std::shared_ptr<const ThetaGrid>;

/// Density with respect to the grid measure: f^k >= 0, sum_k f^k mu_k = 1.
/// Immutable; copies share the grid.
class MixingDensity
{
public:
    static constexpr double mass_tolerance = 1e-10;

    /// Validates nonnegativity and unit mass within mass_tolerance.
    MixingDensity(GridPtr grid, Eigen::VectorXd values);

    /// Rescales nonnegative raw values to unit mass.
    static MixingDensity normalized(GridPtr grid, Eigen::VectorXd raw);
    static MixingDensity uniform(GridPtr grid);
    static MixingDensity point_mass(GridPtr grid, std::size_t k);
    /// Bin(size, prob) placed on consecutive grid points (requires d = size + 1).
    static MixingDensity binomial(GridPtr grid, int size, double prob);
    /// Atoms at given theta values (each must be a grid point).
    static MixingDensity atoms(GridPtr grid, const std::vector<double>& thetas,
                               const std::vector<double>& probs);
    /// Beta(a, b) density evaluated on the grid and renormalized under mu.
    static MixingDensity beta(GridPtr grid, double a, double b);

    const ThetaGrid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    double operator[](std::size_t k) const { return values_[static_cast<Eigen::Index>(k)]; }

    /// Point masses f^k mu_k.
    Eigen::VectorXd pmf() const;
    double total_mass() const;
    double min_value() const { return values_.minCoeff(); }

private:
    GridPtr grid_;
    Eigen::VectorXd values_;
};

inline GridPtr share(ThetaGrid grid)
{
    return std::make_shared<const ThetaGrid>(std::move(grid));
}

/// Natural log of the Beta(a, b) density at t in (0, 1).
double log_beta_density(double t, double a, double b);

}  // namespace mixsa::mixture
