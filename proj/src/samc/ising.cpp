#include "mixsa/samc/ising.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace mixsa::samc {

IsingModel::IsingModel(int d) : d_(d)
{
    if (d < 2)
    {
        throw std::invalid_argument(fmt::format("Ising model needs d >= 2 spins, got {}", d));
    }
}

int ising_energy(std::span<const int> config)
{
    if (config.size() < 2)
    {
        throw std::invalid_argument("ising_energy: need at least 2 spins");
    }
    int energy = 0;
    for (std::size_t i = 0; i < config.size(); ++i)
    {
        if (config[i] != 1 && config[i] != -1)
        {
            throw std::invalid_argument(
                fmt::format("ising_energy: spin {} at site {} is not +1 or -1", config[i], i));
        }
        if (i + 1 < config.size())
        {
            energy -= config[i] * config[i + 1];
        }
    }
    return energy;
}

std::vector<double> density_of_states_exact(int d)
{
    if (d < 2 || d > 24)
    {
        throw std::invalid_argument(fmt::format("density_of_states_exact: d={} outside [2, 24]", d));
    }
    std::vector<double> omega(static_cast<std::size_t>(d));
    double choose = 1.0;  // C(d-1, k)
    for (int k = 0; k < d; ++k)
    {
        omega[static_cast<std::size_t>(k)] = 2.0 * choose;
        choose = choose * (d - 1 - k) / (k + 1);
    }
    return omega;
}

std::vector<double> density_of_states_enumerated(int d)
{
    if (d < 2 || d > 16)
    {
        throw std::invalid_argument(
            fmt::format("density_of_states_enumerated: d={} outside [2, 16]", d));
    }
    const IsingModel model(d);
    std::vector<double> omega(model.levels(), 0.0);
    std::vector<int> config(static_cast<std::size_t>(d));
    for (std::uint32_t mask = 0; mask < (1U << d); ++mask)
    {
        for (int i = 0; i < d; ++i)
        {
            config[static_cast<std::size_t>(i)] = (mask >> i) & 1U ? 1 : -1;
        }
        omega[model.level_of(ising_energy(config))] += 1.0;
    }
    return omega;
}

Partition partition_exact(int d, double temperature)
{
    if (!(temperature > 0.0))
    {
        throw std::invalid_argument(fmt::format("partition_exact: T={} must be positive", temperature));
    }
    const double log_z = d * std::log(2.0) + (d - 1) * std::log(std::cosh(1.0 / temperature));
    return {std::exp(log_z), log_z};
}

double log_partition_from_dos(const IsingModel& model, std::span<const double> omega,
                              double temperature)
{
    if (!(temperature > 0.0))
    {
        throw std::invalid_argument("partition: temperature must be positive");
    }
    if (omega.size() != model.levels())
    {
        throw std::invalid_argument("partition: one count per energy level expected");
    }
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k)
    {
        terms[k] = omega[k] > 0.0 ? std::log(omega[k]) - model.level_energy(k) / temperature
                                  : -std::numeric_limits<double>::infinity();
        top = std::max(top, terms[k]);
    }
    double total = 0.0;
    for (double t : terms)
    {
        total += std::exp(t - top);
    }
    return top + std::log(total);
}

double partition_estimate(const IsingModel& model, std::span<const double> omega_hat,
                          double temperature)
{
    return log_partition_from_dos(model, omega_hat, temperature);
}

}  // namespace mixsa::samc
