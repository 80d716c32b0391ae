#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::gallery {

/// lambda N(mu_1, sigma^2) + (1 - lambda) N(mu_2, sigma^2) with lambda and
/// sigma known; the component labels are the missing data.
struct SAEMToyModel
{
    double lambda = 0.3;
    double sigma = 1.0;
};

/// Complete-data sufficient statistics: (count, sum) per component.
struct MixtureStats
{
    std::array<double, 2> count{0.0, 0.0};
    std::array<double, 2> sum{0.0, 0.0};
};

double saem_loglik(const SAEMToyModel& model, std::span<const double> data,
                   const std::array<double, 2>& mu);

/// Probability that x came from component 1.
double responsibility(const SAEMToyModel& model, double x, const std::array<double, 2>& mu);

MixtureStats expected_stats(const SAEMToyModel& model, std::span<const double> data,
                            const std::array<double, 2>& mu);

/// Closed-form M-step; a component with zero count keeps its previous mean.
std::array<double, 2> m_step(const MixtureStats& s, const std::array<double, 2>& previous);

struct SAEMOptions
{
    std::array<double, 2> mu0{-1.0, 1.0};
    std::size_t iterations = 2000;
    std::size_t m = 1;     ///< label vectors simulated per iteration
    bool exact_e = false;  ///< use the exact conditional expectation instead
};

struct SAEMTraceRow
{
    std::size_t n;
    std::array<double, 2> mu;
    double loglik;
};

/// The blended statistics start at the exact expectation under mu0.
std::vector<SAEMTraceRow> run_saem(const SAEMToyModel& model, std::span<const double> data,
                                   const core::WeightSchedule& schedule, const SAEMOptions& options,
                                   Rng& rng);

/// n draws from the toy model with the given means.
std::vector<double> saem_simulate(const SAEMToyModel& model, const std::array<double, 2>& mu,
                                  std::size_t n, Rng& rng);

}  // namespace mixsa::gallery
