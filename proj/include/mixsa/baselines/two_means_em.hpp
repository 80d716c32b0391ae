#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mixsa::baselines {

/// Classical EM for the means of lambda N(mu_1, s^2) + (1 - lambda) N(mu_2, s^2)
/// with lambda and s fixed. Returns mu_0, mu_1, ..., mu_iters.
std::vector<std::array<double, 2>> two_means_em(std::span<const double> data, double lambda,
                                                double sigma, std::array<double, 2> mu0,
                                                std::size_t iters);

double two_means_loglik(std::span<const double> data, double lambda, double sigma,
                        const std::array<double, 2>& mu);

struct TwoMeansFit
{
    std::array<double, 2> mu;
    double loglik;
    std::size_t iterations;
};

/// Iterates until the log-likelihood gain is below tol (cap max_iters).
TwoMeansFit two_means_em_converged(std::span<const double> data, double lambda, double sigma,
                                   std::array<double, 2> mu0, double tol = 1e-10,
                                   std::size_t max_iters = 10000);

}  // namespace mixsa::baselines
