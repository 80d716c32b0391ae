#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixsa/mixture/grid.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::mixture {

/// Sampling family p(x | theta). Evaluation is done in the log domain; the
/// tabulated family is keyed by theta value, so one table serves any grid
/// whose points it lists.
class Kernel
{
public:
    enum class Family
    {
        normal_location,  ///< N(theta, sigma^2) on the real line
        poisson,          ///< Poisson(theta) on the nonnegative integers
        tabulated,        ///< user pmf on a finite set of x values
    };
    enum class SampleSpace
    {
        real_line,
        nonnegative_integers,
        finite_set,
    };

    static Kernel normal(double sigma);
    static Kernel poisson();
    /// rows[j][i] = p(support[i] | thetas[j]); every row must sum to 1 within 1e-6.
    static Kernel tabulated(std::vector<double> support, std::vector<double> thetas,
                            std::vector<std::vector<double>> rows);

    Family family() const noexcept { return family_; }
    SampleSpace sample_space() const noexcept;
    double sigma() const noexcept { return sigma_; }
    const std::vector<double>& support() const noexcept { return support_; }

    bool in_space(double x) const;
    double log_density(double x, double theta) const;
    double density(double x, double theta) const;

    /// log p(x | theta_k) for every grid point. Throws if x is outside the
    /// sample space or a theta has no table row.
    Eigen::VectorXd log_likelihoods(double x, const ThetaGrid& grid) const;
    Eigen::VectorXd likelihoods(double x, const ThetaGrid& grid) const;

    double sample(double theta, Rng& rng) const;

    std::string describe() const;

private:
    Kernel() = default;
    std::size_t support_index(double x) const;
    std::size_t theta_index(double theta) const;

    Family family_ = Family::normal_location;
    double sigma_ = 1.0;
    std::vector<double> support_;
    std::vector<double> thetas_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace mixsa::mixture
