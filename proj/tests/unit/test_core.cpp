#include <doctest.h>

#include <cmath>
#include <random>

#include "mixsa/core/constraint.hpp"
#include "mixsa/core/sa.hpp"
#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/error.hpp"
#include "support/oracles.hpp"

using namespace mixsa;
using namespace mixsa::core;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v)
    {
        out[i++] = x;
    }
    return out;
}

}  // namespace

TEST_CASE("harmonic schedule values")
{
    const auto w = WeightSchedule::harmonic();
    CHECK(w(1) == doctest::Approx(0.5));
    CHECK(w(9) == doctest::Approx(0.1));
    CHECK(w.robbins_monro());
}

TEST_CASE("power schedule rejects exponents that break square summability")
{
    CHECK_THROWS_AS(WeightSchedule::power(1.0, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(WeightSchedule::power(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(WeightSchedule::power(1.0, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(WeightSchedule::power(0.0, 0.75), std::invalid_argument);
    try
    {
        (void)WeightSchedule::power(1.0, 0.4);
    }
    catch (const std::invalid_argument& e)
    {
        CHECK(std::string(e.what()).find("gamma") != std::string::npos);
    }
    const auto w = WeightSchedule::power(0.5, 0.75);
    CHECK(w(16) == doctest::Approx(0.5 / 8.0));
}

TEST_CASE("plateau schedule is flat then harmonic")
{
    const auto w = WeightSchedule::plateau(0.1, 100.0);
    CHECK(w(1) == 0.1);
    CHECK(w(1000) == doctest::Approx(0.1));
    CHECK(w(2000) == doctest::Approx(0.05));
    CHECK_THROWS(WeightSchedule::plateau(1.5, 10.0));
}

TEST_CASE("table schedule and describe")
{
    const auto w = WeightSchedule::table({1.0, 0.5});
    CHECK(w(2) == 0.5);
    CHECK_FALSE(w.robbins_monro());
    CHECK_THROWS(w(3));
    CHECK(WeightSchedule::power(1.0, 0.75).describe() == "power(a=1,gamma=0.75)");
}

TEST_CASE("box projection clamps")
{
    const auto box = ConstraintSet::box(0.0, 1.0);
    CHECK(box.project(vec({1.7}))[0] == 1.0);
    CHECK(box.project(vec({-0.2}))[0] == 0.0);
    CHECK(box.project(vec({0.3}))[0] == 0.3);
}

TEST_CASE("floored simplex projection")
{
    const auto plain = ConstraintSet::floored_simplex(0.0);
    const auto feasible = plain.project(vec({0.2, 0.8}));
    CHECK(feasible[0] == doctest::Approx(0.2));
    CHECK(feasible[1] == doctest::Approx(0.8));

    const auto floored = ConstraintSet::floored_simplex(0.1);
    const auto p = floored.project(vec({-0.3, 1.3}));
    CHECK(p[0] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.9).epsilon(1e-12));

    // Nearest feasible point on a fine grid of the segment.
    double best = 0.0;
    double best_dist = 1e300;
    for (int i = 0; i <= 80000; ++i)
    {
        const double a = 0.1 + 0.8 * i / 80000.0;
        const double dist = std::hypot(a + 0.3, (1.0 - a) - 1.3);
        if (dist < best_dist)
        {
            best_dist = dist;
            best = a;
        }
    }
    CHECK(p[0] == doctest::Approx(best).epsilon(1e-4));
}

TEST_CASE("floored simplex projection agrees with threshold bisection and is idempotent")
{
    std::mt19937_64 g(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        const std::size_t d = 2 + trial % 8;
        const double floor = trial % 3 == 0 ? 0.0 : 0.01;
        std::vector<double> x(d);
        for (double& v : x)
        {
            v = n(g);
        }
        const auto c = ConstraintSet::floored_simplex(floor);
        const auto p = c.project(Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(d)));
        const auto ref = oracle::floored_simplex_projection(x, floor);
        for (std::size_t k = 0; k < d; ++k)
        {
            CHECK(p[static_cast<Eigen::Index>(k)] == doctest::Approx(ref[k]).epsilon(1e-9));
        }
        CHECK(c.contains(p));
        CHECK((c.project(p) - p).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("floored simplex needs d * floor < 1")
{
    CHECK_THROWS(ConstraintSet::floored_simplex(0.5).project(vec({0.2, 0.3, 0.5})));
    CHECK_THROWS(ConstraintSet::floored_simplex(-0.1));
}

TEST_CASE("sa_step arithmetic")
{
    const SAState s{0, vec({0.0})};
    const auto r = sa_step(s, vec({2.0}), 0.5, ConstraintSet::unconstrained());
    CHECK(r.state.x[0] == 1.0);
    CHECK(r.state.n == 1);
    CHECK_FALSE(r.projected);
    CHECK(r.z[0] == 0.0);
}

TEST_CASE("sa_step projection correction")
{
    const SAState s{0, vec({0.9})};
    const auto r = sa_step(s, vec({2.0}), 0.5, ConstraintSet::box(0.0, 1.0));
    CHECK(r.state.x[0] == 1.0);
    CHECK(r.projected);
    // 1 = 0.9 + 0.5 (2 + z)
    CHECK(r.z[0] == doctest::Approx(-1.8));
}

TEST_CASE("sa_step at an equilibrium and on bad input")
{
    const SAState s{3, vec({2.0, -1.0})};
    const auto r = sa_step(s, vec({0.0, 0.0}), 0.25, ConstraintSet::unconstrained());
    CHECK(r.state.x == s.x);
    CHECK_THROWS_AS(sa_step(s, vec({NAN, 0.0}), 0.25, ConstraintSet::unconstrained()), NumericError);
    CHECK_THROWS_AS(sa_step(s, vec({0.0, 0.0}), 0.0, ConstraintSet::unconstrained()), std::invalid_argument);
    CHECK_THROWS_AS(sa_step(s, vec({0.0}), 0.5, ConstraintSet::unconstrained()), std::invalid_argument);
}

TEST_CASE("run_sa with zero drift keeps the initial value")
{
    Rng rng(1);
    const Observer zero = [](std::size_t, const Eigen::VectorXd& x, Rng&) { return Eigen::VectorXd::Zero(x.size()); };
    const auto t = run_sa(vec({0.7}), WeightSchedule::harmonic(), zero, ConstraintSet::unconstrained(), 50, rng);
    CHECK(t.x.size() == 51);
    for (const auto& x : t.x)
    {
        CHECK(x[0] == 0.7);
    }
}

TEST_CASE("running mean embedding")
{
    Rng rng(1);
    const std::vector<double> z{1.0, 3.0};
    const Observer obs = [&](std::size_t n, const Eigen::VectorXd& x, Rng&) { return vec({z[n - 1] - x[0]}); };
    const auto t = run_sa(vec({0.0}), WeightSchedule::power(1.0, 1.0), obs, ConstraintSet::unconstrained(), 2, rng);
    CHECK(t.final()[0] == doctest::Approx(2.0));
}

TEST_CASE("running mean equals the arithmetic mean to rounding")
{
    Rng rng(11);
    std::normal_distribution<double> normal(1.0, 2.0);
    std::vector<double> draws;
    const Observer obs = [&](std::size_t, const Eigen::VectorXd& x, Rng& r) {
        draws.push_back(normal(r));
        return vec({draws.back() - x[0]});
    };
    const auto t = run_sa(vec({0.0}), WeightSchedule::power(1.0, 1.0), obs, ConstraintSet::unconstrained(), 10000,
                          rng, 1000);
    double sum = 0.0;
    for (double v : draws)
    {
        sum += v;
    }
    const double mean = sum / static_cast<double>(draws.size());
    CHECK(std::abs(t.final()[0] - mean) <= 1e-12 * std::abs(mean));
    CHECK(t.n.back() == 10000);
    CHECK(t.n.size() == 11);
}

TEST_CASE("noise-free linear drift converges")
{
    Rng rng(1);
    const Observer obs = [](std::size_t, const Eigen::VectorXd& x, Rng&) { return vec({2.0 - x[0]}); };
    const auto t = run_sa(vec({0.0}), WeightSchedule::harmonic(), obs, ConstraintSet::unconstrained(), 10000, rng, 0);
    CHECK(std::abs(t.final()[0] - 2.0) < 1e-3);
    CHECK(t.max_sq_norm_y == doctest::Approx(4.0));
}

TEST_CASE("run_sa is deterministic given the seed")
{
    auto once = [] {
        Rng rng(99);
        const Observer obs = [](std::size_t, const Eigen::VectorXd& x, Rng& r) {
            return vec({uniform01(r) - x[0]});
        };
        return run_sa(vec({0.0}), WeightSchedule::harmonic(), obs, ConstraintSet::box(0.0, 1.0), 500, rng);
    };
    const auto a = once();
    const auto b = once();
    REQUIRE(a.x.size() == b.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i)
    {
        CHECK(a.x[i][0] == b.x[i][0]);
    }
}
