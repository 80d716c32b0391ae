#include "mixsa/npp/bound_scan.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mixsa/core/constraint.hpp"
#include "mixsa/npp/npp.hpp"
#include "mixsa/rng.hpp"

namespace mixsa::npp {

double linear_term(double theta_k, double theta_j, double s)
{
    return theta_k * theta_k - theta_j * theta_j + 2.0 * s * (theta_j - theta_k);
}

BoundScanReport np4_bound_scan(const BoundScanConfig& config)
{
    if (!config.grid || config.phis.empty() || config.psis.empty() || config.s_values.empty())
    {
        throw std::invalid_argument("np4_bound_scan: empty scan grid");
    }
    const auto d = static_cast<Eigen::Index>(config.grid->size());
    const auto ns = static_cast<Eigen::Index>(config.s_values.size());

    std::vector<mixture::MixingDensity> phis;
    for (const auto& v : config.phis)
    {
        phis.emplace_back(config.grid, v);
    }

    BoundScanReport report;
    report.s_values = config.s_values;
    report.sup = Eigen::MatrixXd::Zero(d, ns);
    for (Eigen::Index j = 0; j < ns; ++j)
    {
        const double s = config.s_values[static_cast<std::size_t>(j)];
        for (const auto& phi : phis)
        {
            for (double psi : config.psis)
            {
                const double h = config.relative_step * psi;
                const Eigen::VectorXd up = H_suff(s, phi, psi + h, config.r);
                const Eigen::VectorXd down = H_suff(s, phi, psi - h, config.r);
                const Eigen::VectorXd deriv = ((up - down) / (2.0 * h)).cwiseAbs();
                report.sup.col(j) = report.sup.col(j).cwiseMax(deriv);
            }
        }
    }
    for (Eigen::Index k = 0; k < d; ++k)
    {
        Eigen::Index best = 0;
        const double top = report.sup.row(k).maxCoeff(&best);
        report.max_value.push_back(top);
        report.argmax_s.push_back(config.s_values[static_cast<std::size_t>(best)]);
        report.boundary_low.push_back(report.sup(k, 0));
        report.boundary_high.push_back(report.sup(k, ns - 1));
    }
    return report;
}

BoundScanConfig default_scan_config(mixture::GridPtr grid, double floor, std::size_t r,
                                    double s_max)
{
    BoundScanConfig config;
    const auto d = static_cast<Eigen::Index>(grid->size());
    config.grid = grid;
    config.r = r;

    const auto simplex = core::ConstraintSet::floored_simplex(floor);
    config.phis.push_back(Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d)));
    if (d > 1)
    {
        Eigen::VectorXd binom(d);
        const int size = static_cast<int>(d - 1);
        for (int j = 0; j <= size; ++j)
        {
            binom[j] = std::exp(std::lgamma(size + 1.0) - std::lgamma(j + 1.0) -
                                std::lgamma(size - j + 1.0) - size * std::log(2.0));
        }
        config.phis.push_back(simplex.project(binom));
        for (Eigen::Index k = 0; k < d; ++k)
        {
            Eigen::VectorXd vertex = Eigen::VectorXd::Constant(d, floor);
            vertex[k] = 1.0 - floor * static_cast<double>(d - 1);
            config.phis.push_back(vertex);
        }
        Rng rng(20090205);
        std::gamma_distribution<double> gamma(1.0, 1.0);
        for (int i = 0; i < 8; ++i)
        {
            Eigen::VectorXd g(d);
            for (Eigen::Index k = 0; k < d; ++k)
            {
                g[k] = gamma(rng);
            }
            config.phis.push_back(simplex.project(g / g.sum()));
        }
    }

    for (int i = 0; i <= 20; ++i)
    {
        config.psis.push_back(std::pow(10.0, -1.0 + 2.0 * i / 20.0));
    }
    const auto steps = static_cast<int>(std::llround(2.0 * s_max / 0.05));
    for (int i = 0; i <= steps; ++i)
    {
        config.s_values.push_back(-s_max + 0.05 * i);
    }
    config.s_values.back() = s_max;
    return config;
}

}  // namespace mixsa::npp
