#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"
#include "mixsa/samc/ising.hpp"

namespace mixsa::samc {

SAMCState initial_samc_state(const IsingModel& model, Rng& rng)
{
    SAMCState state;
    state.theta.assign(model.levels(), 0.0);
    state.visits.assign(model.levels(), 0);
    state.z.resize(static_cast<std::size_t>(model.spins()));
    for (int& spin : state.z)
    {
        spin = uniform01(rng) < 0.5 ? -1 : 1;
    }
    state.energy = ising_energy(state.z);
    return state;
}

void samc_step(SAMCState& state, const IsingModel& model, std::span<const double> pi, double w,
               Rng& rng)
{
    const auto d = state.z.size();
    const auto site = std::min(d - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(d)));
    int neighbours = 0;
    if (site > 0)
    {
        neighbours += state.z[site - 1];
    }
    if (site + 1 < d)
    {
        neighbours += state.z[site + 1];
    }
    const int proposed = state.energy + 2 * state.z[site] * neighbours;
    const auto cur = model.level_of(state.energy);
    const auto prop = model.level_of(proposed);
    const double log_ratio = state.theta[cur] - state.theta[prop];
    if (log_ratio >= 0.0 || uniform01(rng) < std::exp(log_ratio))
    {
        state.z[site] = -state.z[site];
        state.energy = proposed;
    }
    const auto cell = model.level_of(state.energy);
    for (std::size_t k = 0; k < state.theta.size(); ++k)
    {
        state.theta[k] += w * ((k == cell ? 1.0 : 0.0) - pi[k]);
    }
    ++state.visits[cell];
    ++state.n;
}

core::WeightSchedule default_samc_schedule()
{
    return core::WeightSchedule::plateau(0.1, 100.0);
}

std::vector<double> normalize_omega(std::span<const double> theta, std::span<const double> pi,
                                    double total, std::vector<double>* log_omega)
{
    if (theta.size() != pi.size() || theta.empty())
    {
        throw std::invalid_argument("normalize_omega: theta and pi sizes differ");
    }
    if (!(total > 0.0))
    {
        throw std::invalid_argument("normalize_omega: total must be positive");
    }
    std::vector<double> logs(theta.size());
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < theta.size(); ++k)
    {
        logs[k] = pi[k] > 0.0 ? theta[k] + std::log(pi[k]) : -std::numeric_limits<double>::infinity();
        top = std::max(top, logs[k]);
    }
    if (!std::isfinite(top))
    {
        throw NumericError("samc", "no finite log weight to normalize");
    }
    double mass = 0.0;
    for (double v : logs)
    {
        mass += std::exp(v - top);
    }
    const double shift = std::log(total) - top - std::log(mass);
    for (double& v : logs)
    {
        v += shift;
    }

    // Multiples of a power-of-two quantum add exactly while the sum stays
    // below 2^53 quanta.
    const double quantum = std::ldexp(1.0, std::ilogb(total) - 40);
    std::vector<double> omega(logs.size());
    double rounded_sum = 0.0;
    std::size_t largest = 0;
    for (std::size_t k = 0; k < logs.size(); ++k)
    {
        omega[k] = std::round(std::exp(logs[k]) / quantum) * quantum;
        rounded_sum += omega[k];
        if (omega[k] > omega[largest])
        {
            largest = k;
        }
    }
    omega[largest] += total - rounded_sum;
    if (log_omega != nullptr)
    {
        *log_omega = std::move(logs);
    }
    return omega;
}

SAMCResult run_samc(const IsingModel& model, std::vector<double> pi,
                    const core::WeightSchedule& schedule, std::size_t n_iters, Rng& rng)
{
    const auto m = model.levels();
    if (pi.empty())
    {
        pi.assign(m, 1.0 / static_cast<double>(m));
    }
    if (pi.size() != m)
    {
        throw std::invalid_argument(fmt::format("run_samc: pi has {} entries, model has {} levels",
                                                pi.size(), m));
    }
    double pi_sum = 0.0;
    for (double p : pi)
    {
        if (!(p > 0.0))
        {
            throw std::invalid_argument("run_samc: pi entries must be positive");
        }
        pi_sum += p;
    }
    if (std::abs(pi_sum - 1.0) > 1e-12)
    {
        throw std::invalid_argument(fmt::format("run_samc: pi sums to {}, not 1", pi_sum));
    }
    if (n_iters == 0)
    {
        throw std::invalid_argument("run_samc: n_iters must be positive");
    }

    SAMCState state = initial_samc_state(model, rng);
    for (std::size_t n = 1; n <= n_iters; ++n)
    {
        samc_step(state, model, pi, schedule(n), rng);
    }

    SAMCResult result;
    result.iterations = state.n;
    result.schedule = schedule.describe();
    result.omega = normalize_omega(state.theta, pi, std::ldexp(1.0, model.spins()), &result.log_omega);
    result.visit_frequency.resize(m);
    for (std::size_t k = 0; k < m; ++k)
    {
        result.visit_frequency[k] = static_cast<double>(state.visits[k]) / static_cast<double>(state.n);
        if (state.visits[k] == 0)
        {
            result.unvisited.push_back(k);
        }
    }
    return result;
}

}  // namespace mixsa::samc
