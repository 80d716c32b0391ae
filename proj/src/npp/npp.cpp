#include "mixsa/npp/npp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mixsa/error.hpp"
#include "mixsa/mixture/divergence.hpp"
#include "mixsa/mixture/mixture.hpp"
#include "mixsa/mixture/quadrature.hpp"

namespace mixsa::npp {

ReplicateRow ReplicateRow::from(std::span<const double> values)
{
    if (values.size() < 2)
    {
        throw std::invalid_argument("replicate row needs r >= 2");
    }
    ReplicateRow row;
    row.x.assign(values.begin(), values.end());
    double total = 0.0;
    for (double v : values)
    {
        total += v;
    }
    row.mean = total / static_cast<double>(values.size());
    for (double v : values)
    {
        row.ss += (v - row.mean) * (v - row.mean);
    }
    return row;
}

double ReplicateRow::sample_variance() const
{
    if (r() < 2)
    {
        throw std::invalid_argument("sample variance needs r >= 2");
    }
    return ss / static_cast<double>(r() - 1);
}

std::vector<ReplicateRow> rows_from_matrix(const Eigen::MatrixXd& x)
{
    std::vector<ReplicateRow> rows;
    rows.reserve(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
    {
        const Eigen::VectorXd row = x.row(i).transpose();
        rows.push_back(ReplicateRow::from(std::span<const double>(row.data(), row.size())));
    }
    return rows;
}

double ube_update(double prev_xi, std::size_t i, const ReplicateRow& row)
{
    if (i < 1)
    {
        throw std::invalid_argument("ube_update: i must be >= 1");
    }
    const auto di = static_cast<double>(i);
    return ((di - 1.0) * prev_xi + row.sample_variance()) / di;
}

double bayes_update(std::size_t i, double pooled_ss, std::size_t r)
{
    const double dof = static_cast<double>(i) * (static_cast<double>(r) - 1.0);
    if (!(dof > 2.0))
    {
        throw std::domain_error(fmt::format(
            "bayes_update: posterior mean undefined for i(r-1) = {} <= 2", dof));
    }
    return pooled_ss / (dof - 2.0);
}

namespace {

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_w, const MixingDensity& phi)
{
    const Eigen::Index d = log_w.size();
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < d; ++k)
    {
        top = std::max(top, log_w[k]);
    }
    if (!std::isfinite(top))
    {
        throw NumericError("npp_estimator", "joint densities vanish for every theta");
    }
    Eigen::VectorXd w(d);
    double total = 0.0;
    for (Eigen::Index k = 0; k < d; ++k)
    {
        w[k] = std::exp(log_w[k] - top);
        total += w[k] * phi.grid().weight(static_cast<std::size_t>(k));
    }
    return w / total - phi.values();
}

Eigen::VectorXd log_prior(const MixingDensity& phi)
{
    Eigen::VectorXd lp(static_cast<Eigen::Index>(phi.size()));
    for (Eigen::Index k = 0; k < lp.size(); ++k)
    {
        lp[k] = phi.values()[k] > 0.0 ? std::log(phi.values()[k])
                                      : -std::numeric_limits<double>::infinity();
    }
    return lp;
}

void require_variance(double psi)
{
    if (!(psi > 0.0) || !std::isfinite(psi))
    {
        throw std::invalid_argument(fmt::format("variance psi={} must be positive", psi));
    }
}

}  // namespace

Eigen::VectorXd H_rep(const ReplicateRow& row, const MixingDensity& phi, double psi)
{
    require_variance(psi);
    Eigen::VectorXd log_w = log_prior(phi);
    for (Eigen::Index k = 0; k < log_w.size(); ++k)
    {
        const double theta = phi.grid().point(static_cast<std::size_t>(k));
        double q = 0.0;
        for (double v : row.x)
        {
            q += (v - theta) * (v - theta);
        }
        log_w[k] += -q / (2.0 * psi);
    }
    return normalize_log_weights(log_w, phi);
}

Eigen::VectorXd H_suff(double s, const MixingDensity& phi, double psi, std::size_t r)
{
    require_variance(psi);
    Eigen::VectorXd log_w = log_prior(phi);
    const double scale = static_cast<double>(r) / (2.0 * psi);
    for (Eigen::Index k = 0; k < log_w.size(); ++k)
    {
        const double diff = s - phi.grid().point(static_cast<std::size_t>(k));
        log_w[k] += -scale * diff * diff;
    }
    return normalize_log_weights(log_w, phi);
}

NPState initial_state(const MixingDensity& f0, const NppConfig& config)
{
    if (!f0.grid().is_counting())
    {
        throw std::invalid_argument("N+P runs on a finite Theta with counting measure");
    }
    const auto simplex = core::ConstraintSet::floored_simplex(config.floor);
    if (!simplex.contains(f0.values()))
    {
        throw std::invalid_argument("N+P: f0 must lie in the floored simplex");
    }
    const double xi0 = config.estimator == VarianceEstimator::known ? config.known_xi : config.xi0;
    if (!(xi0 >= config.xi_lo && xi0 <= config.xi_hi))
    {
        throw std::invalid_argument("N+P: initial xi outside the box");
    }
    return NPState{0, f0, xi0, 0.0, 0, 0};
}

NPState npp_step(const NPState& state, const ReplicateRow& row, double w, const NppConfig& config)
{
    if (row.r() < 2)
    {
        throw std::invalid_argument("npp_step: r must be >= 2");
    }
    NPState next = state;
    next.n = state.n + 1;
    next.pooled_ss = state.pooled_ss + row.ss;

    double raw_xi = state.xi;
    switch (config.estimator)
    {
    case VarianceEstimator::known:
        raw_xi = config.known_xi;
        break;
    case VarianceEstimator::ube:
        raw_xi = ube_update(state.xi, next.n, row);
        break;
    case VarianceEstimator::bayes: {
        const double dof = static_cast<double>(next.n) * (static_cast<double>(row.r()) - 1.0);
        raw_xi = dof > 2.0 ? bayes_update(next.n, next.pooled_ss, row.r())
                           : ube_update(state.xi, next.n, row);
        break;
    }
    }
    const auto box = core::ConstraintSet::box(config.xi_lo, config.xi_hi);
    next.xi = std::clamp(raw_xi, box.lo(), box.hi());
    if (next.xi != raw_xi)
    {
        ++next.proj_box;
    }

    const Eigen::VectorXd raw_f = state.f.values() + w * H_suff(row.mean, state.f, next.xi, row.r());
    const auto simplex = core::ConstraintSet::floored_simplex(config.floor);
    Eigen::VectorXd projected = simplex.project(raw_f);
    if (!(projected.array() == raw_f.array()).all())
    {
        ++next.proj_simplex;
    }
    next.f = MixingDensity(state.f.grid_ptr(), std::move(projected));
    return next;
}

NppRun run_npp(std::span<const ReplicateRow> rows, const MixingDensity& f0,
               const core::WeightSchedule& schedule, const NppConfig& config, std::size_t stride)
{
    if (rows.empty())
    {
        throw std::invalid_argument("run_npp: no data");
    }
    NppRun run{initial_state(f0, config), {}, config.estimator != VarianceEstimator::bayes};
    auto record = [&run](const NPState& s) {
        run.trace.push_back({s.n, s.xi, s.f.values(), s.proj_simplex, s.proj_box});
    };
    if (stride > 0)
    {
        record(run.final);
    }
    for (std::size_t i = 1; i <= rows.size(); ++i)
    {
        try
        {
            run.final = npp_step(run.final, rows[i - 1], schedule(i), config);
        }
        catch (const NumericError& e)
        {
            throw e.at_iteration(i);
        }
        if (stride > 0 && (i % stride == 0 || i == rows.size()))
        {
            record(run.final);
        }
    }
    return run;
}

double kl_row_mean(const MixingDensity& f, double xi, const MixingDensity& f_hat, double xi_hat,
                   std::size_t r)
{
    if (!(f.grid() == f_hat.grid()))
    {
        throw std::invalid_argument("kl_row_mean: densities live on different grids");
    }
    if (!(xi > 0.0) || !(xi_hat > 0.0) || r == 0)
    {
        throw std::invalid_argument("kl_row_mean: variances and r must be positive");
    }
    const double sd = std::sqrt(xi / static_cast<double>(r));
    const double sd_hat = std::sqrt(xi_hat / static_cast<double>(r));
    const double wide = std::max(sd, sd_hat);
    const auto& pts = f.grid().points();
    const auto q = mixture::trapezoid_rule(pts.front() - 8.0 * wide, pts.back() + 8.0 * wide,
                                           std::min(sd, sd_hat) / 20.0);
    const auto a = mixture::marginal_on_nodes(
        f, mixture::likelihood_matrix(mixture::Kernel::normal(sd), f.grid(), q));
    const auto b = mixture::marginal_on_nodes(
        f_hat, mixture::likelihood_matrix(mixture::Kernel::normal(sd_hat), f.grid(), q));
    return mixture::kl_from_marginals(a, b, q.weights);
}

}  // namespace mixsa::npp
