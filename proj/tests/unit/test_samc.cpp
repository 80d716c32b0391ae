#include <doctest.h>

#include <cmath>

#include "mixsa/samc/ising.hpp"
#include "support/oracles.hpp"

using namespace mixsa;
using namespace mixsa::samc;

TEST_CASE("chain energies")
{
    std::vector<int> up(10, 1);
    CHECK(ising_energy(up) == -9);
    std::vector<int> alt(10);
    for (int i = 0; i < 10; ++i)
    {
        alt[static_cast<std::size_t>(i)] = i % 2 == 0 ? 1 : -1;
    }
    CHECK(ising_energy(alt) == 9);
    CHECK(ising_energy(std::vector<int>{1, 1, -1}) == 0);
}

TEST_CASE("level indexing")
{
    const IsingModel m(10);
    CHECK(m.levels() == 10);
    CHECK(m.level_energy(0) == -9);
    CHECK(m.level_energy(9) == 9);
    CHECK(m.level_of(-9) == 0);
    CHECK(m.level_of(1) == 5);
    CHECK_THROWS(IsingModel(1));
}

TEST_CASE("exact density of states")
{
    const auto three = density_of_states_exact(3);
    CHECK(three == std::vector<double>{2.0, 4.0, 2.0});
    const auto ten = density_of_states_exact(10);
    double total = 0.0;
    for (double v : ten)
    {
        total += v;
    }
    CHECK(total == 1024.0);
    for (int d = 2; d <= 12; ++d)
    {
        CHECK(density_of_states_exact(d) == oracle::ising_levels_bruteforce(d));
    }
    CHECK(density_of_states_enumerated(8) == density_of_states_exact(8));
}

TEST_CASE("exact partition function")
{
    const auto z = partition_exact(10, 1.0);
    CHECK(z.log_value == doctest::Approx(10.0 * std::log(2.0) + 9.0 * std::log(std::cosh(1.0))).epsilon(1e-14));
    CHECK(z.log_value == doctest::Approx(10.8355).epsilon(1e-5));
    CHECK(partition_exact(10, 1e6).value == doctest::Approx(1024.0).epsilon(1e-6));

    const IsingModel m(10);
    const auto omega = density_of_states_exact(10);
    double prev = 0.0;
    for (double t = 1.0; t <= 4.0; t += 0.25)
    {
        CHECK(partition_estimate(m, omega, t) == doctest::Approx(partition_exact(10, t).log_value).epsilon(1e-12));
        CHECK(log_partition_from_dos(m, omega, t) == doctest::Approx(partition_exact(10, t).log_value).epsilon(1e-12));
        const double now = std::exp(partition_estimate(m, omega, t));
        if (t > 1.0)
        {
            // Z decreases in T here because the negative-energy levels carry the mass.
            CHECK(now < prev);
        }
        prev = now;
    }
}

TEST_CASE("theta update")
{
    const IsingModel m(2);
    Rng rng(3);
    auto s = initial_samc_state(m, rng);
    s.theta = {0.0, 0.0};
    const std::vector<double> pi{0.5, 0.5};
    samc_step(s, m, pi, 0.1, rng);
    const auto level = m.level_of(s.energy);
    CHECK(s.theta[level] == doctest::Approx(0.05));
    CHECK(s.theta[1 - level] == doctest::Approx(-0.05));
    CHECK(s.n == 1);
    CHECK(ising_energy(s.z) == s.energy);
}

TEST_CASE("flat working target accepts every flip")
{
    const IsingModel m(6);
    Rng rng(21);
    auto s = initial_samc_state(m, rng);
    const std::vector<double> pi(6, 1.0 / 6.0);
    for (int i = 0; i < 200; ++i)
    {
        const auto before = s.z;
        samc_step(s, m, pi, 1e-300, rng);
        int changed = 0;
        for (std::size_t j = 0; j < before.size(); ++j)
        {
            changed += before[j] != s.z[j] ? 1 : 0;
        }
        CHECK(changed == 1);
    }
}

TEST_CASE("omega normalisation is exact")
{
    const std::vector<double> theta{0.3, 1.7, -0.2, 2.9, 0.0};
    const std::vector<double> pi(5, 0.2);
    std::vector<double> log_omega;
    const auto omega = normalize_omega(theta, pi, 64.0, &log_omega);
    double total = 0.0;
    for (double v : omega)
    {
        total += v;
    }
    CHECK(total == 64.0);
    CHECK(log_omega.size() == 5);
    CHECK(omega[3] / omega[0] == doctest::Approx(std::exp(2.6)).epsilon(1e-9));
}

TEST_CASE("three-spin chain recovers (2, 4, 2)")
{
    const IsingModel m(3);
    Rng rng(2024);
    const auto res = run_samc(m, {}, default_samc_schedule(), 1000000, rng);
    const std::vector<double> exact{2.0, 4.0, 2.0};
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(std::abs(res.omega[k] / exact[k] - 1.0) < 0.05);
        CHECK(std::abs(res.visit_frequency[k] - 1.0 / 3.0) < 0.02);
    }
    CHECK(res.unvisited.empty());
    CHECK(res.schedule == default_samc_schedule().describe());
}

TEST_CASE("ten-spin chain partition function")
{
    const IsingModel m(10);
    Rng rng(77);
    const auto res = run_samc(m, {}, default_samc_schedule(), 100000, rng);
    double total = 0.0;
    for (double v : res.omega)
    {
        total += v;
    }
    CHECK(total == 1024.0);
    double worst = 0.0;
    for (double t = 1.0; t <= 4.0; t += 0.5)
    {
        worst = std::max(worst, std::abs(partition_estimate(m, res.omega, t) - partition_exact(10, t).log_value));
    }
    CHECK(worst <= 0.5);
}

TEST_CASE("short runs flag unvisited levels")
{
    const IsingModel m(10);
    Rng rng(1);
    const auto res = run_samc(m, {}, default_samc_schedule(), 3, rng);
    CHECK_FALSE(res.unvisited.empty());
}
