#include <doctest.h>

#include <cmath>

#include "mixsa/baselines/dirichlet.hpp"
#include "mixsa/mixture/divergence.hpp"
#include "mixsa/mixture/mixture.hpp"
#include "mixsa/mixture/quadrature.hpp"
#include "mixsa/mixture/simulate.hpp"
#include "mixsa/newton/lyapunov.hpp"
#include "mixsa/newton/markov.hpp"
#include "mixsa/newton/newton.hpp"
#include "support/oracles.hpp"

using namespace mixsa;
using namespace mixsa::newton;
using mixture::GridPtr;
using mixture::Kernel;
using mixture::MixingDensity;
using mixture::ThetaGrid;

namespace {

MixingDensity dens(const GridPtr& g, std::initializer_list<double> v)
{
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v)
    {
        x[i++] = a;
    }
    return MixingDensity(g, x);
}

GridPtr pm_one()
{
    return mixture::share(ThetaGrid::counting({-1.0, 1.0}));
}

struct TableModel
{
    GridPtr g = mixture::share(ThetaGrid::counting({1.0, 2.0}));
    Kernel k = Kernel::tabulated({0.0, 1.0}, {1.0, 2.0}, {{0.8, 0.2}, {0.3, 0.7}});
    mixture::XQuadrature q = mixture::quadrature_for(k, *g);
};

double harmonic_w(std::size_t i)
{
    return 1.0 / static_cast<double>(i + 1);
}

}  // namespace

TEST_CASE("one newton update")
{
    const auto g = pm_one();
    const auto f = newton_update(dens(g, {0.5, 0.5}), 1.0, 0.5, Kernel::normal(1.0));
    CHECK(f[0] == doctest::Approx(0.309602).epsilon(1e-6));
    CHECK(f[1] == doctest::Approx(0.690398).epsilon(1e-6));
}

TEST_CASE("tiny weights leave the estimate unchanged")
{
    const auto g = mixture::share(ThetaGrid::integers(-4, 4));
    const auto f0 = MixingDensity::binomial(g, 8, 0.3);
    const auto f = newton_update(f0, 2.5, 1e-12, Kernel::normal(1.0));
    CHECK((f.values() - f0.values()).cwiseAbs().maxCoeff() < 1e-11);
    CHECK_THROWS(newton_update(f0, 2.5, 0.0, Kernel::normal(1.0)));
    CHECK_THROWS(newton_update(f0, 2.5, 1.5, Kernel::normal(1.0)));
}

TEST_CASE("H map")
{
    const auto g = pm_one();
    const auto phi = dens(g, {0.5, 0.5});
    const auto h = H_map(1.0, phi, Kernel::normal(1.0));
    CHECK(h[0] == doctest::Approx(-0.380797).epsilon(1e-6));
    CHECK(h[1] == doctest::Approx(0.380797).epsilon(1e-6));
    CHECK(H_map(0.0, dens(g, {0.3, 0.7}), Kernel::normal(1.0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mean-field maps on a tabulated kernel")
{
    const TableModel m;
    const auto f = dens(m.g, {0.5, 0.5});
    const auto phi = dens(m.g, {0.2, 0.8});
    const auto h = h_map(phi, f, m.k, m.q);
    CHECK(h[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(-0.05).epsilon(1e-12));
    const auto t = T_map(phi, f, m.k, m.q);
    CHECK(t[0] == doctest::Approx(0.25));
    CHECK(t[1] == doctest::Approx(0.75));
    CHECK(h_map(f, f, m.k, m.q).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fixed point on the integer grid")
{
    const auto g = mixture::share(ThetaGrid::integers(-4, 4));
    const auto k = Kernel::normal(1.0);
    const auto f = MixingDensity::binomial(g, 8, 0.6);
    const MeanField field(f, k, mixture::quadrature_for(k, *g));
    CHECK(field.h(f).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(field.h(MixingDensity::uniform(g)).sum()) < 1e-8);
}

TEST_CASE("lyapunov gradient")
{
    const auto g = pm_one();
    const auto f = dens(g, {0.5, 0.5});
    CHECK(lyapunov_gradient(f, f).cwiseAbs().maxCoeff() < 1e-15);
    const auto grad = lyapunov_gradient(f, dens(g, {0.25, 0.75}));
    CHECK(grad[0] == doctest::Approx(-4.0 / 3.0));
    CHECK(grad[1] == doctest::Approx(0.0));
    const auto edge = lyapunov_gradient(dens(g, {1.0, 0.0}), f);
    CHECK(edge[0] == doctest::Approx(0.0));
    CHECK(edge[1] == doctest::Approx(0.0));
    CHECK_THROWS(lyapunov_gradient(f, dens(g, {1.0, 0.0})));
}

TEST_CASE("lyapunov gradient against finite differences on the support")
{
    // f = (0.6, 0.4, 0); l depends on phi only through the support coordinates.
    const auto g = mixture::share(ThetaGrid::counting({0.0, 1.0, 2.0}));
    const auto f = dens(g, {0.6, 0.4, 0.0});
    const auto phi = dens(g, {0.3, 0.5, 0.2});
    const auto grad = lyapunov_gradient(f, phi);
    auto ell = [&](const Eigen::VectorXd& p) { return 0.6 * std::log(0.6 / p[0]) + 0.4 * std::log(0.4 / p[1]); };
    Eigen::VectorXd v(3);
    v << 1.0, -1.0, 0.0;  // mass on supp(f) held fixed
    const double h = 1e-6;
    const double fd = (ell(phi.values() + h * v) - ell(phi.values() - h * v)) / (2 * h);
    CHECK(grad.dot(v) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("lyapunov time derivative")
{
    const TableModel m;
    const auto f = dens(m.g, {0.5, 0.5});
    const auto phi = dens(m.g, {0.2, 0.8});
    CHECK(lyapunov_time_derivative(f, phi, m.k, m.q) == doctest::Approx(-0.09375).epsilon(1e-12));
    CHECK(std::abs(lyapunov_time_derivative(f, f, m.k, m.q)) < 1e-8);
    const MeanField field(f, m.k, m.q);
    const auto rep = lyapunov_report(field, phi);
    CHECK(rep.value == doctest::Approx(mixture::kl_theta(f, phi)));
    CHECK(rep.jensen_slack >= 0.0);
    CHECK(rep.gradient.dot(field.h(phi)) == doctest::Approx(rep.time_derivative).epsilon(1e-12));
}

TEST_CASE("run_newton matches a direct recursion")
{
    const auto g = mixture::share(ThetaGrid::integers(-4, 4));
    const auto k = Kernel::normal(1.0);
    Rng rng(4);
    const auto x = mixture::sample_mixture(MixingDensity::binomial(g, 8, 0.6), k, rng, 200).first_column();
    const auto run = run_newton(x, MixingDensity::uniform(g), core::WeightSchedule::harmonic(), k);
    const auto ref = oracle::newton_naive(std::vector<double>(9, 1.0 / 9.0), x, g->points(), 1.0, harmonic_w);
    for (std::size_t j = 0; j < 9; ++j)
    {
        CHECK(run.estimate[j] == doctest::Approx(ref[j]).epsilon(1e-10));
        CHECK(run.estimate[j] > 0.0);
    }
    CHECK(run.order_hash == order_hash(x));
    auto reversed = x;
    std::reverse(reversed.begin(), reversed.end());
    CHECK(order_hash(reversed) != order_hash(x));
}

TEST_CASE("one observation reproduces the DP posterior mean")
{
    const auto g = mixture::share(ThetaGrid::integers(-4, 4));
    const auto k = Kernel::normal(1.0);
    const auto f0 = MixingDensity::uniform(g);
    const std::vector<double> x{0.8};
    const auto run = run_newton(x, f0, core::WeightSchedule::harmonic(), k);
    const auto dp = baselines::dpp_one_step_posterior_mean(0.8, baselines::DPPrior(1.0, f0), k);
    CHECK((run.estimate.values() - dp.values()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("estimate improves on the initial guess at n = 100")
{
    const auto g = mixture::share(ThetaGrid::integers(-4, 4));
    const auto k = Kernel::normal(1.0);
    const auto f = MixingDensity::binomial(g, 8, 0.6);
    const MeanField field(f, k, mixture::quadrature_for(k, *g));
    Rng rng(20090205);
    const auto x = mixture::sample_mixture(f, k, rng, 100).first_column();
    NewtonOptions opts;
    opts.stride = 10;
    opts.truth = &field;
    const auto f0 = MixingDensity::uniform(g);
    const auto run = run_newton(x, f0, core::WeightSchedule::harmonic(), k, opts);
    CHECK(mixture::kl_theta(f, run.estimate) < mixture::kl_theta(f, f0));
    CHECK(run.trace.size() == 11);
    CHECK(run.trace.front().n == 0);
    CHECK(run.trace.back().kl_marginal == doctest::Approx(field.kl_marginal(run.estimate)));
}

TEST_CASE("markov chain marginal")
{
    const auto g = mixture::share(ThetaGrid::integers(-2, 2));
    const auto k = Kernel::normal(1.0);
    const auto f0 = MixingDensity::binomial(g, 4, 0.3);
    Rng rng(17);
    const auto zero = markov_marginal_sample({}, f0, core::WeightSchedule::harmonic(), k, rng, 50000);
    CHECK(total_variation(zero, f0.pmf()) < 0.01);

    const std::vector<double> x{1.2};
    const auto one = markov_marginal_sample(x, f0, core::WeightSchedule::table({1.0}), k, rng, 50000);
    CHECK(total_variation(one, mixture::posterior(f0, k, 1.2).pmf()) < 0.01);

    Eigen::VectorXd p(2);
    Eigen::VectorXd q(2);
    p << 1.0, 0.0;
    q << 0.25, 0.75;
    CHECK(total_variation(p, q) == doctest::Approx(0.75));
}
