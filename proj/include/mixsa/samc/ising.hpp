#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::samc {

/// Open 1-D Ising chain of d spins with energy E(x) = -sum_i x_i x_{i+1}.
/// Energy levels are u_k = -(d - 1) + 2k, k = 0..d-1 (k = number of
/// unlike neighbour pairs).
class IsingModel
{
public:
    explicit IsingModel(int d);

    int spins() const noexcept { return d_; }
    std::size_t levels() const noexcept { return static_cast<std::size_t>(d_); }
    int level_energy(std::size_t k) const noexcept { return -(d_ - 1) + 2 * static_cast<int>(k); }
    std::size_t level_of(int energy) const noexcept
    {
        return static_cast<std::size_t>((energy + d_ - 1) / 2);
    }

private:
    int d_;
};

/// Throws std::invalid_argument for spins outside {-1, +1} or fewer than 2.
int ising_energy(std::span<const int> config);

/// Omega(u_k) = 2 C(d-1, k), for 2 <= d <= 24.
std::vector<double> density_of_states_exact(int d);

/// Counts levels over all 2^d configurations (2 <= d <= 16).
std::vector<double> density_of_states_enumerated(int d);

struct Partition
{
    double value;
    double log_value;
};

/// Z(T) = 2^d cosh^{d-1}(1/T); throws for T <= 0.
Partition partition_exact(int d, double temperature);

/// log sum_k Omega_k exp(-u_k / T) for level counts on the model's levels.
double log_partition_from_dos(const IsingModel& model, std::span<const double> omega,
                              double temperature);

/// SAMC iterate: log weights theta (one per energy level), chain
/// configuration and visit counters.
struct SAMCState
{
    std::size_t n = 0;
    std::vector<double> theta;
    std::vector<int> z;
    int energy = 0;
    std::vector<std::size_t> visits;
};

SAMCState initial_samc_state(const IsingModel& model, Rng& rng);

/// One single-spin-flip Metropolis move targeting p(z) ~ exp(-theta[cell(z)]),
/// then theta += w (zeta - pi) with zeta the one-hot cell indicator.
void samc_step(SAMCState& state, const IsingModel& model, std::span<const double> pi, double w,
               Rng& rng);

struct SAMCResult
{
    std::vector<double> log_omega;  ///< normalized so that sum Omega = 2^d
    std::vector<double> omega;      ///< sums to exactly 2^d
    std::vector<double> visit_frequency;
    std::vector<std::size_t> unvisited;  ///< flagged levels
    std::size_t iterations = 0;
    std::string schedule;
};

/// Default schedule: plateau(w0 = 0.1, n0 = 100).
core::WeightSchedule default_samc_schedule();

/// pi defaults to uniform when empty.
SAMCResult run_samc(const IsingModel& model, std::vector<double> pi,
                    const core::WeightSchedule& schedule, std::size_t n_iters, Rng& rng);

/// Identifiability fix: Omega_i ~ exp(theta_i) pi_i scaled to sum to total.
/// The values are rounded onto a dyadic grid so that their sum is exactly
/// `total` in floating point regardless of summation order.
std::vector<double> normalize_omega(std::span<const double> theta, std::span<const double> pi,
                                    double total, std::vector<double>* log_omega = nullptr);

/// Plug-in estimate log Z_hat(T) = log sum_u Omega_hat(u) exp(-u / T).
double partition_estimate(const IsingModel& model, std::span<const double> omega_hat,
                          double temperature);

}  // namespace mixsa::samc
