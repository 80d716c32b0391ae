#pragma once

#include <Eigen/Dense>

namespace mixsa::core {

/// Closed convex set onto which projected SA iterates are mapped.
/// Projection is Euclidean in every case.
class ConstraintSet
{
public:
    enum class Kind
    {
        unconstrained,
        box,              ///< lo <= x_k <= hi for every component
        floored_simplex,  ///< x_k >= floor, sum_k x_k = 1
    };

    static ConstraintSet unconstrained();
    static ConstraintSet box(double lo, double hi);
    /// Requires floor >= 0; the dimension check d * floor < 1 happens at projection.
    static ConstraintSet floored_simplex(double floor);

    Kind kind() const noexcept { return kind_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double floor() const noexcept { return lo_; }

    Eigen::VectorXd project(const Eigen::VectorXd& x) const;

    /// Membership test; the simplex sum is checked to `sum_tol`.
    bool contains(const Eigen::VectorXd& x, double sum_tol = 1e-12) const;

private:
    ConstraintSet(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}

    Kind kind_;
    double lo_;
    double hi_;
};

/// Euclidean projection onto the probability simplex {p >= 0, sum p = 1}
/// by the sort-and-threshold rule.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& x);

}  // namespace mixsa::core
