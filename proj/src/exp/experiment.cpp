#include "mixsa/exp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "mixsa/baselines/dirichlet.hpp"
#include "mixsa/baselines/npml.hpp"
#include "mixsa/baselines/two_means_em.hpp"
#include "mixsa/error.hpp"
#include "mixsa/exp/plot.hpp"
#include "mixsa/gallery/adaptive_metropolis.hpp"
#include "mixsa/gallery/saem.hpp"
#include "mixsa/gallery/sa_examples.hpp"
#include "mixsa/mixture/divergence.hpp"
#include "mixsa/mixture/mixture.hpp"
#include "mixsa/mixture/simulate.hpp"
#include "mixsa/newton/newton.hpp"
#include "mixsa/npp/npp.hpp"
#include "mixsa/samc/ising.hpp"

namespace mixsa::exp {

using mixture::GridPtr;
using mixture::MixingDensity;

namespace {

enum Purpose : std::uint64_t
{
    kData = 0,
    kAlgorithm = 1,
    kParticles = 2,
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string rep_name(std::size_t rep)
{
    return fmt::format("rep_{:03d}", rep);
}

std::string num(double v)
{
    return format_double(v);
}

std::string num(std::size_t v)
{
    return std::to_string(v);
}

class Stopwatch
{
public:
    explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}

    double ms() const
    {
        if (!enabled_)
        {
            return 0.0;
        }
        const auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    bool enabled_;
    std::chrono::steady_clock::time_point start_;
};

/// Common model objects, built once and shared read-only across threads.
struct Model
{
    GridPtr grid;
    mixture::Kernel kernel;
    MixingDensity truth;
    MixingDensity initial;
    core::WeightSchedule schedule;
};

Model build_model(const ExperimentConfig& c)
{
    auto grid = mixture::share(c.grid.build());
    const GridPtr truth_grid = c.truth_grid ? mixture::share(c.truth_grid->build()) : grid;
    return {grid, c.kernel.build(), c.truth.build(truth_grid), c.initial.build(grid), c.schedule.build()};
}

CsvTable density_vector_table(const std::vector<std::string>& lead, std::size_t d,
                              const std::vector<std::string>& tail)
{
    CsvTable t;
    t.header = lead;
    for (std::size_t k = 1; k <= d; ++k)
    {
        t.header.push_back(fmt::format("f_{}", k));
    }
    t.header.insert(t.header.end(), tail.begin(), tail.end());
    return t;
}

std::vector<std::string> vector_cells(const Eigen::VectorXd& v)
{
    std::vector<std::string> cells;
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        cells.push_back(num(v[i]));
    }
    return cells;
}

std::vector<double> data_stream(const Model& m, std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    return mixture::sample_mixture(m.truth, m.kernel, rng, n).first_column();
}

// --- Newton (finite and compact) -------------------------------------------

RepOutput newton_rep(const ExperimentConfig& c, const Model& m, const newton::MeanField& field,
                     std::size_t rep)
{
    RepOutput out;
    Rng data_rng(rep_seed(c.seed, rep, kData));
    const auto obs = mixture::sample_mixture(m.truth, m.kernel, data_rng, c.n);
    const auto x = obs.first_column();
    out.files.emplace_back("data/" + rep_name(rep) + ".csv", to_csv(mixture::dataset_table(obs, rep)));

    const Stopwatch watch(c.timing);
    newton::NewtonOptions opts;
    opts.stride = c.effective_stride();
    opts.truth = &field;
    const auto run = newton::run_newton(x, m.initial, m.schedule, m.kernel, opts);
    const double ms = watch.ms();

    CsvTable trace = density_vector_table({"n"}, m.grid->size(), {"kl_theta", "kl_marginal"});
    for (const auto& row : run.trace)
    {
        std::vector<std::string> cells{num(row.n)};
        const auto f = vector_cells(row.f);
        cells.insert(cells.end(), f.begin(), f.end());
        cells.push_back(num(row.kl_theta));
        cells.push_back(num(row.kl_marginal));
        trace.rows.push_back(std::move(cells));
    }
    out.files.emplace_back("traces/newton_" + rep_name(rep) + ".csv", to_csv(trace));
    out.files.emplace_back("estimates/newton_" + rep_name(rep) + ".csv",
                           to_csv(mixture::density_table(run.estimate)));
    out.summary.push_back({rep, "newton", mixture::kl_theta(m.truth, run.estimate),
                           field.kl_marginal(run.estimate), ms});
    out.tables["order_hash"].push_back({num(rep), fmt::format("{:016x}", run.order_hash)});
    return out;
}

// --- compare: Newton vs NPML vs NPB ------------------------------------------

RepOutput compare_rep(const ExperimentConfig& c, const Model& m, const newton::MeanField& field,
                      std::size_t rep)
{
    RepOutput out;
    Rng data_rng(rep_seed(c.seed, rep, kData));
    const auto obs = mixture::sample_mixture(m.truth, m.kernel, data_rng, c.n);
    const auto x = obs.first_column();
    out.files.emplace_back("data/" + rep_name(rep) + ".csv", to_csv(mixture::dataset_table(obs, rep)));

    auto record = [&](const std::string& name, const MixingDensity& est, double ms) {
        out.summary.push_back({rep, name, mixture::kl_theta(m.truth, est), field.kl_marginal(est), ms});
        out.files.emplace_back("estimates/" + name + "_" + rep_name(rep) + ".csv",
                               to_csv(mixture::density_table(est)));
    };

    {
        const Stopwatch watch(c.timing);
        const auto run = newton::run_newton(x, m.initial, m.schedule, m.kernel);
        record("newton", run.estimate, watch.ms());
    }
    {
        const Stopwatch watch(c.timing);
        const auto fit = baselines::npml_em(x, m.grid, m.kernel);
        const double ms = watch.ms();
        record("npml", fit.estimate, ms);
        out.tables["em_monotonicity"].push_back({num(rep), num(fit.iterations), fit.converged ? "1" : "0",
                                                 num(fit.min_increment())});
    }
    {
        const Stopwatch watch(c.timing);
        Rng rng(rep_seed(c.seed, rep, kParticles));
        const baselines::DPPrior prior(c.dp_alpha, m.initial);
        baselines::SisOptions opts;
        opts.particles = c.particles;
        const auto sis = baselines::npb_sequential_imputation(x, prior, m.kernel, opts, rng);
        record("npb", sis.estimate, watch.ms());
        out.tables["npb_ess"].push_back({num(rep), num(sis.ess)});
    }
    return out;
}

// --- N+P -------------------------------------------------------------------

RepOutput npp_rep(const ExperimentConfig& c, const Model& m, std::size_t rep)
{
    RepOutput out;
    Rng data_rng(rep_seed(c.seed, rep, kData));
    const auto obs = mixture::sample_mixture(m.truth, mixture::Kernel::normal(std::sqrt(c.variance)), data_rng,
                                             c.n, c.replicates);
    out.files.emplace_back("data/" + rep_name(rep) + ".csv", to_csv(mixture::dataset_table(obs, rep)));
    const auto rows = npp::rows_from_matrix(obs.x);

    std::vector<std::pair<std::string, npp::VarianceEstimator>> estimators;
    if (c.npp_estimator == "known" || c.npp_estimator == "all")
    {
        estimators.emplace_back("known", npp::VarianceEstimator::known);
    }
    if (c.npp_estimator == "ube" || c.npp_estimator == "all")
    {
        estimators.emplace_back("ube", npp::VarianceEstimator::ube);
    }
    if (c.npp_estimator == "bayes" || c.npp_estimator == "all")
    {
        estimators.emplace_back("bayes", npp::VarianceEstimator::bayes);
    }
    for (const auto& [name, kind] : estimators)
    {
        npp::NppConfig cfg;
        cfg.floor = c.npp_floor;
        cfg.xi0 = c.npp_xi0;
        cfg.estimator = kind;
        cfg.known_xi = c.variance;
        const Stopwatch watch(c.timing);
        const auto run = npp::run_npp(rows, m.initial, m.schedule, cfg, c.effective_stride());
        const double ms = watch.ms();
        CsvTable trace = density_vector_table({"n", "xi"}, m.grid->size(), {"proj_simplex_count", "proj_box_count"});
        for (const auto& row : run.trace)
        {
            std::vector<std::string> cells{num(row.n), num(row.xi)};
            const auto f = vector_cells(row.f);
            cells.insert(cells.end(), f.begin(), f.end());
            cells.push_back(num(row.proj_simplex));
            cells.push_back(num(row.proj_box));
            trace.rows.push_back(std::move(cells));
        }
        out.files.emplace_back("traces/npp_" + name + "_" + rep_name(rep) + ".csv", to_csv(trace));
        const auto& fin = run.final;
        out.summary.push_back({rep, name, mixture::kl_theta(m.truth, fin.f),
                               npp::kl_row_mean(m.truth, c.variance, fin.f, fin.xi, c.replicates), ms});
        out.tables["npp_xi"].push_back({num(rep), name, num(fin.xi), num(fin.proj_simplex), num(fin.proj_box),
                                        run.recursive ? "1" : "0"});
    }
    return out;
}

// --- SAMC ------------------------------------------------------------------

RepOutput samc_rep(const ExperimentConfig& c, const core::WeightSchedule& schedule, std::size_t rep)
{
    RepOutput out;
    const samc::IsingModel model(c.spins);
    Rng rng(rep_seed(c.seed, rep, kAlgorithm));
    const Stopwatch watch(c.timing);
    const auto res = samc::run_samc(model, {}, schedule, c.n, rng);
    const double ms = watch.ms();
    const auto exact = samc::density_of_states_exact(c.spins);

    CsvTable levels{{"u", "omega_exact", "omega_hat", "visit_frequency"}, {}};
    for (std::size_t k = 0; k < model.levels(); ++k)
    {
        levels.rows.push_back({std::to_string(model.level_energy(k)), num(exact[k]), num(res.omega[k]),
                               num(res.visit_frequency[k])});
    }
    out.files.emplace_back("samc/levels_" + rep_name(rep) + ".csv", to_csv(levels));

    CsvTable partition{{"T", "logZ_exact", "logZ_hat"}, {}};
    double worst = 0.0;
    for (double t : c.temperatures)
    {
        const double exact_log = samc::partition_exact(c.spins, t).log_value;
        const double hat = samc::partition_estimate(model, res.omega, t);
        worst = std::max(worst, std::abs(hat - exact_log));
        partition.rows.push_back({num(t), num(exact_log), num(hat)});
    }
    out.files.emplace_back("samc/partition_" + rep_name(rep) + ".csv", to_csv(partition));

    double total = 0.0;
    for (double v : res.omega)
    {
        total += v;
    }
    // K between the normalized exact and estimated level distributions.
    double kl = 0.0;
    const double z = std::ldexp(1.0, c.spins);
    for (std::size_t k = 0; k < exact.size(); ++k)
    {
        const double p = exact[k] / z;
        const double q = res.omega[k] / z;
        kl += q > 0.0 ? p * std::log(p / q) : std::numeric_limits<double>::infinity();
    }
    out.tables["samc_summary"].push_back(
        {num(rep), num(worst), num(total), num(kl), num(res.unvisited.size()), res.schedule, num(ms)});
    for (auto k : res.unvisited)
    {
        out.warnings.push_back(fmt::format("rep {}: energy level {} never visited; estimate flagged", rep,
                                           model.level_energy(k)));
    }
    return out;
}

// --- gallery ---------------------------------------------------------------

CsvTable trace_table(const core::Trace& t, const std::string& column)
{
    CsvTable table{{"n", column}, {}};
    for (std::size_t i = 0; i < t.n.size(); ++i)
    {
        table.rows.push_back({num(t.n[i]), num(t.x[i][0])});
    }
    return table;
}

RepOutput gallery_rep(const ExperimentConfig& c, const core::WeightSchedule& schedule, std::size_t rep)
{
    RepOutput out;
    const auto& g = c.gallery;
    Rng rng(rep_seed(c.seed, rep, kAlgorithm));
    const auto stride = c.effective_stride();
    const auto& name = c.gallery_name;

    if (name == "running-mean")
    {
        std::normal_distribution<double> normal(g.xi, 1.0);
        double direct = 0.0;
        const core::Observer observe = [&](std::size_t, const Eigen::VectorXd& x, Rng& r) {
            const double z = normal(r);
            direct += z;
            return Eigen::VectorXd::Constant(1, z - x[0]);
        };
        const auto t = core::run_sa(Eigen::VectorXd::Zero(1), schedule, observe,
                                    core::ConstraintSet::unconstrained(), c.n, rng, stride);
        out.files.emplace_back("traces/running_mean_" + rep_name(rep) + ".csv", to_csv(trace_table(t, "x")));
        out.tables["gallery_summary"].push_back(
            {num(rep), num(t.final()[0]), num(direct / static_cast<double>(c.n)), num(std::abs(t.final()[0] - g.xi))});
    }
    else if (name == "t-quantile")
    {
        const double root = t_quantile(g.alpha, g.nu);
        for (std::size_t s = 0; s < g.starts.size(); ++s)
        {
            const auto t = gallery::t_quantile_sa(g.alpha, g.nu, g.starts[s], schedule, c.n, rng);
            const double tail = gallery::tail_mean(t, 100);
            CsvTable thin{{"n", "x"}, {}};
            for (std::size_t i = 0; i < t.n.size(); ++i)
            {
                if (t.n[i] % stride == 0 || i + 1 == t.n.size())
                {
                    thin.rows.push_back({num(t.n[i]), num(t.x[i][0])});
                }
            }
            out.files.emplace_back(fmt::format("traces/t_quantile_x0_{}_{}.csv", s, rep_name(rep)), to_csv(thin));
            out.tables["gallery_summary"].push_back(
                {num(rep), num(g.starts[s]), num(tail), num(root), num(std::abs(tail - root))});
        }
    }
    else if (name == "eb")
    {
        const auto t = gallery::eb_poisson_exp_sa(g.xi, g.x0, schedule, c.n, rng, stride);
        out.files.emplace_back("traces/eb_" + rep_name(rep) + ".csv", to_csv(trace_table(t, "x")));
        out.tables["gallery_summary"].push_back(
            {num(rep), num(t.final()[0]), num(std::abs(t.final()[0] - g.xi)), num(t.projections)});
    }
    else if (name == "am")
    {
        const double mean = g.target_mean;
        const double sd = g.target_sd;
        const gallery::LogTarget target = [mean, sd](const Eigen::VectorXd& z) {
            const double t = (z[0] - mean) / sd;
            return -0.5 * t * t;
        };
        auto init = gallery::am_initial(target, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1),
                                        Eigen::MatrixXd::Identity(1, 1));
        const auto run = gallery::run_am(target, std::move(init), schedule, c.n, rng, stride);
        CsvTable trace{{"n", "mu", "sigma", "acceptance"}, {}};
        for (const auto& row : run.trace)
        {
            trace.rows.push_back({num(row.n), num(row.mu[0]), num(row.sigma(0, 0)), num(row.acceptance)});
        }
        out.files.emplace_back("traces/am_" + rep_name(rep) + ".csv", to_csv(trace));
        const auto& s = run.final;
        out.tables["gallery_summary"].push_back(
            {num(rep), num(s.mu[0]), num(s.sigma(0, 0)),
             num(static_cast<double>(s.accepted) / static_cast<double>(s.n))});
    }
    else if (name == "saem")
    {
        const gallery::SAEMToyModel model{g.lambda, g.sigma};
        Rng data_rng(rep_seed(c.seed, rep, kData));
        const auto data = gallery::saem_simulate(model, {g.means[0], g.means[1]}, g.points, data_rng);
        const std::array<double, 2> init{g.init_means[0], g.init_means[1]};
        gallery::SAEMOptions opts;
        opts.mu0 = init;
        opts.iterations = c.n;
        opts.m = g.draws;
        const auto trace = gallery::run_saem(model, data, schedule, opts, rng);
        const auto em = baselines::two_means_em_converged(data, g.lambda, g.sigma, init);

        opts.exact_e = true;
        opts.iterations = 20;
        const auto exact = gallery::run_saem(model, data, core::WeightSchedule::table(std::vector<double>(20, 1.0)),
                                             opts, rng);
        const auto em_path = baselines::two_means_em(data, g.lambda, g.sigma, init, 20);
        double diff = 0.0;
        for (std::size_t i = 0; i < exact.size(); ++i)
        {
            for (std::size_t k = 0; k < 2; ++k)
            {
                diff = std::max(diff, std::abs(exact[i].mu[k] - em_path[i][k]));
            }
        }
        CsvTable table{{"n", "mu_1", "mu_2", "loglik"}, {}};
        for (const auto& row : trace)
        {
            if (row.n % stride == 0 || row.n == c.n)
            {
                table.rows.push_back({num(row.n), num(row.mu[0]), num(row.mu[1]), num(row.loglik)});
            }
        }
        out.files.emplace_back("traces/saem_" + rep_name(rep) + ".csv", to_csv(table));
        out.tables["gallery_summary"].push_back({num(rep), num(trace.back().loglik), num(em.loglik),
                                                 num(std::abs(trace.back().loglik - em.loglik)), num(diff)});
    }
    return out;
}

const std::vector<std::string>& gallery_header(const std::string& name)
{
    static const std::map<std::string, std::vector<std::string>> headers{
        {"running-mean", {"rep_id", "x_final", "direct_mean", "abs_error"}},
        {"t-quantile", {"rep_id", "x0", "tail_mean", "root", "abs_error"}},
        {"eb", {"rep_id", "x_final", "abs_error", "projections"}},
        {"am", {"rep_id", "mu", "sigma", "acceptance"}},
        {"saem", {"rep_id", "saem_loglik", "em_loglik", "loglik_gap", "exact_e_max_diff"}},
    };
    return headers.at(name);
}

// --- conjecture ------------------------------------------------------------

RepOutput conjecture_rep(const ExperimentConfig& c, const Model& m, const mixture::XQuadrature& q,
                         double infimum, std::size_t rep)
{
    RepOutput out;
    const auto x = data_stream(m, c.n, rep_seed(c.seed, rep, kData));
    MixingDensity f = m.initial;
    const Stopwatch watch(c.timing);
    std::vector<std::size_t> marks = c.checkpoints;
    std::sort(marks.begin(), marks.end());
    for (std::size_t i = 1; i <= c.n; ++i)
    {
        f = newton::newton_update(f, x[i - 1], m.schedule(i), m.kernel);
        if (std::binary_search(marks.begin(), marks.end(), i))
        {
            const double kl = mixture::kl_marginal(m.truth, f, m.kernel, q);
            out.tables["conjecture"].push_back({num(rep), num(i), num(kl), num(infimum), num(kl - infimum)});
        }
    }
    const double kl = mixture::kl_marginal(m.truth, f, m.kernel, q);
    const bool same = m.truth.grid() == *m.grid;
    out.summary.push_back({rep, "newton", same ? mixture::kl_theta(m.truth, f) : kNaN, kl, watch.ms()});
    out.files.emplace_back("estimates/newton_" + rep_name(rep) + ".csv", to_csv(mixture::density_table(f)));
    return out;
}

// --- plots -----------------------------------------------------------------

std::vector<double> column_of(const CsvTable& t, const std::string& name)
{
    return t.numeric_column(name);
}

void add_plot(std::vector<std::pair<std::string, std::string>>& files, const std::string& path,
              const std::string& svg)
{
    files.emplace_back(path, svg);
}

const std::string* find_file(const std::vector<std::pair<std::string, std::string>>& files,
                             const std::string& path)
{
    for (const auto& [p, text] : files)
    {
        if (p == path)
        {
            return &text;
        }
    }
    return nullptr;
}

void make_plots(const ExperimentConfig& c, const ExperimentResult& result,
                std::vector<std::pair<std::string, std::string>>& files)
{
    const std::string rep0 = rep_name(0);
    if (!result.summary.empty())
    {
        std::vector<BoxGroup> groups;
        for (const auto& r : result.summary)
        {
            auto it = std::find_if(groups.begin(), groups.end(), [&](const BoxGroup& g) { return g.label == r.estimator; });
            if (it == groups.end())
            {
                groups.push_back({r.estimator, {}});
                it = groups.end() - 1;
            }
            it->values.push_back(r.kl_marginal);
        }
        PlotSpec spec{"K(Pi_f, Pi_hat) over replications", "estimator", "KL (log10 scale)", true, {}};
        add_plot(files, "plots/summary_kl_marginal.svg", box_plot_svg(groups, spec));
    }
    switch (c.kind)
    {
    case ExperimentKind::newton_finite:
    case ExperimentKind::newton_compact: {
        std::vector<Series> series;
        for (std::size_t rep = 0; rep < std::min<std::size_t>(c.reps, 8); ++rep)
        {
            const auto* text = find_file(files, "traces/newton_" + rep_name(rep) + ".csv");
            const auto t = parse_csv(*text);
            series.push_back({rep_name(rep), column_of(t, "n"), column_of(t, "kl_marginal")});
        }
        add_plot(files, "plots/kl_marginal_trace.svg",
                 line_plot_svg(series, {"K(Pi_f, Pi_fn) along the recursion", "n", "KL (log10 scale)", true, {}}));
        const auto est = parse_csv(*find_file(files, "estimates/newton_" + rep0 + ".csv"));
        const auto truth = build_model(c).truth;
        add_plot(files, "plots/estimate_" + rep0 + ".svg",
                 line_plot_svg({{"truth", truth.grid().points(), std::vector<double>(truth.values().data(),
                                                                                      truth.values().data() + truth.size())},
                                {"newton", column_of(est, "theta"), column_of(est, "value")}},
                               {"Mixing density", "theta", "density", false, {}}));
        break;
    }
    case ExperimentKind::samc_ising: {
        const auto t = parse_csv(*find_file(files, "samc/partition_" + rep0 + ".csv"));
        add_plot(files, "plots/logz_" + rep0 + ".svg",
                 line_plot_svg({{"exact", column_of(t, "T"), column_of(t, "logZ_exact")},
                                {"SAMC", column_of(t, "T"), column_of(t, "logZ_hat")}},
                               {"log Z(T) for the 1-D Ising chain", "T", "log Z", false, {}}));
        break;
    }
    case ExperimentKind::gallery: {
        const auto& g = c.gallery;
        if (c.gallery_name == "t-quantile")
        {
            std::vector<Series> series;
            for (std::size_t s = 0; s < g.starts.size(); ++s)
            {
                const auto t = parse_csv(*find_file(files, fmt::format("traces/t_quantile_x0_{}_{}.csv", s, rep0)));
                series.push_back({fmt::format("x0 = {}", g.starts[s]), column_of(t, "n"), column_of(t, "x")});
            }
            add_plot(files, "plots/t_quantile_" + rep0 + ".svg",
                     line_plot_svg(series, {"SA for the t quantile", "n", "x_n", false, {t_quantile(g.alpha, g.nu)}}));
        }
        else if (c.gallery_name == "eb" || c.gallery_name == "running-mean")
        {
            const std::string stem = c.gallery_name == "eb" ? "eb" : "running_mean";
            const auto t = parse_csv(*find_file(files, "traces/" + stem + "_" + rep0 + ".csv"));
            add_plot(files, "plots/" + stem + "_" + rep0 + ".svg",
                     line_plot_svg({{"x_n", column_of(t, "n"), column_of(t, "x")}}, {stem, "n", "x_n", false, {g.xi}}));
        }
        else if (c.gallery_name == "am")
        {
            const auto t = parse_csv(*find_file(files, "traces/am_" + rep0 + ".csv"));
            add_plot(files, "plots/am_" + rep0 + ".svg",
                     line_plot_svg({{"mu_n", column_of(t, "n"), column_of(t, "mu")},
                                    {"Sigma_n", column_of(t, "n"), column_of(t, "sigma")}},
                                   {"Adaptive Metropolis moments", "n", "value", false,
                                    {g.target_mean, g.target_sd * g.target_sd}}));
        }
        else if (c.gallery_name == "saem")
        {
            const auto t = parse_csv(*find_file(files, "traces/saem_" + rep0 + ".csv"));
            const auto& rows = result.tables.at("gallery_summary");
            const double em = parse_double(rows.rows.front()[2]);
            add_plot(files, "plots/saem_" + rep0 + ".svg",
                     line_plot_svg({{"SAEM", column_of(t, "n"), column_of(t, "loglik")}},
                                   {"SAEM log-likelihood", "n", "log-likelihood", false, {em}}));
        }
        break;
    }
    case ExperimentKind::conjecture: {
        const auto& table = result.tables.at("conjecture");
        std::vector<Series> series;
        std::map<std::string, std::size_t> index;
        for (const auto& row : table.rows)
        {
            auto [it, inserted] = index.emplace(row[0], series.size());
            if (inserted)
            {
                series.push_back({"rep " + row[0], {}, {}});
            }
            series[it->second].x.push_back(parse_double(row[1]));
            series[it->second].y.push_back(parse_double(row[4]));
        }
        if (!series.empty())
        {
            add_plot(files, "plots/conjecture_gap.svg",
                     line_plot_svg(series, {"K(Pi_f, Pi_fn) - inf K", "n", "gap (log10 scale)", true, {}}));
        }
        break;
    }
    default:
        break;
    }
}

std::map<std::string, std::vector<std::string>> table_headers(const ExperimentConfig& c)
{
    std::map<std::string, std::vector<std::string>> h{
        {"order_hash", {"rep_id", "order_hash"}},
        {"em_monotonicity", {"rep_id", "iterations", "converged", "min_increment"}},
        {"npb_ess", {"rep_id", "ess"}},
        {"npp_xi", {"rep_id", "estimator", "xi", "proj_simplex_count", "proj_box_count", "recursive"}},
        {"samc_summary",
         {"rep_id", "max_abs_logz_error", "omega_sum", "kl_levels", "unvisited", "schedule", "wall_ms"}},
        {"conjecture", {"rep_id", "n", "kl_marginal", "infimum", "gap"}},
    };
    if (c.kind == ExperimentKind::gallery)
    {
        h["gallery_summary"] = gallery_header(c.gallery_name);
    }
    return h;
}

}  // namespace

std::uint64_t rep_seed(std::uint64_t seed, std::size_t rep, std::uint64_t purpose)
{
    return split_seed(split_seed(seed, rep), purpose);
}

double t_quantile(double alpha, double nu)
{
    return boost::math::quantile(boost::math::students_t(nu), alpha);
}

mixture::XQuadrature shared_quadrature(const mixture::Kernel& kernel, const mixture::ThetaGrid& a,
                                       const mixture::ThetaGrid& b)
{
    std::vector<double> pts = a.points();
    pts.insert(pts.end(), b.points().begin(), b.points().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return mixture::quadrature_for(kernel, mixture::ThetaGrid::counting(pts));
}

ConjectureInfimum conjecture_infimum(const MixingDensity& f, const GridPtr& grid, const mixture::Kernel& kernel,
                                     const mixture::XQuadrature& q)
{
    const auto lik = mixture::likelihood_matrix(kernel, f.grid(), q);
    const Eigen::VectorXd pi_f = mixture::marginal_on_nodes(f, lik);
    std::vector<double> nodes;
    std::vector<double> weights;
    for (std::size_t j = 0; j < q.size(); ++j)
    {
        const double a = pi_f[static_cast<Eigen::Index>(j)] * q.weights[j];
        if (a > 0.0)
        {
            nodes.push_back(q.nodes[j]);
            weights.push_back(a);
        }
    }
    baselines::EmOptions opts;
    opts.tol = 1e-10;
    opts.max_iters = 1000000;
    const auto fit = baselines::npml_em_weighted(nodes, weights, MixingDensity::uniform(grid), kernel, opts);
    return {fit.estimate, mixture::kl_marginal(f, fit.estimate, kernel, q), fit.iterations};
}

std::vector<RepOutput> run_replications(std::size_t reps, std::size_t threads,
                                        const std::function<RepOutput(std::size_t)>& fn)
{
    std::vector<RepOutput> outputs(reps);
    std::vector<std::exception_ptr> errors(reps);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t rep = next++; rep < reps; rep = next++)
        {
            try
            {
                outputs[rep] = fn(rep);
            }
            catch (...)
            {
                errors[rep] = std::current_exception();
            }
        }
    };
    const auto n_threads = std::max<std::size_t>(1, std::min(threads, reps));
    if (n_threads == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t)
        {
            pool.emplace_back(worker);
        }
        for (auto& th : pool)
        {
            th.join();
        }
    }
    for (const auto& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
    return outputs;
}

CsvTable summary_table(const std::vector<SummaryRecord>& records)
{
    CsvTable t{{"rep_id", "estimator", "kl_theta", "kl_marginal", "wall_ms"}, {}};
    for (const auto& r : records)
    {
        t.rows.push_back({num(r.rep_id), r.estimator, num(r.kl_theta), num(r.kl_marginal), num(r.wall_ms)});
    }
    return t;
}

ExperimentResult compute_experiment(const ExperimentConfig& c, const RunOptions& options,
                                    std::vector<std::pair<std::string, std::string>>* files)
{
    validate(c);
    std::ostream& log = options.log ? *options.log : std::cerr;
    std::mutex log_mutex;
    std::size_t done = 0;
    auto progress = [&](RepOutput out) {
        if (!options.quiet)
        {
            std::lock_guard lock(log_mutex);
            ++done;
            log << fmt::format("[{}] replication {}/{} done\n", to_string(c.kind), done, c.reps);
        }
        return out;
    };

    std::vector<RepOutput> outputs;
    std::vector<std::pair<std::string, std::string>> extra_files;
    switch (c.kind)
    {
    case ExperimentKind::newton_finite:
    case ExperimentKind::newton_compact:
    case ExperimentKind::compare: {
        const Model m = build_model(c);
        const newton::MeanField field(m.truth, m.kernel, mixture::quadrature_for(m.kernel, *m.grid));
        outputs = run_replications(c.reps, c.threads, [&](std::size_t rep) {
            return progress(c.kind == ExperimentKind::compare ? compare_rep(c, m, field, rep)
                                                              : newton_rep(c, m, field, rep));
        });
        extra_files.emplace_back("truth.csv", to_csv(mixture::density_table(m.truth)));
        break;
    }
    case ExperimentKind::npp: {
        const Model m = build_model(c);
        outputs = run_replications(c.reps, c.threads, [&](std::size_t rep) { return progress(npp_rep(c, m, rep)); });
        extra_files.emplace_back("truth.csv", to_csv(mixture::density_table(m.truth)));
        break;
    }
    case ExperimentKind::samc_ising: {
        const auto schedule = c.schedule.build();
        outputs = run_replications(c.reps, c.threads,
                                   [&](std::size_t rep) { return progress(samc_rep(c, schedule, rep)); });
        break;
    }
    case ExperimentKind::gallery: {
        const auto schedule = c.schedule.build();
        outputs = run_replications(c.reps, c.threads,
                                   [&](std::size_t rep) { return progress(gallery_rep(c, schedule, rep)); });
        break;
    }
    case ExperimentKind::conjecture: {
        const Model m = build_model(c);
        const auto q = shared_quadrature(m.kernel, m.truth.grid(), *m.grid);
        const auto inf = conjecture_infimum(m.truth, m.grid, m.kernel, q);
        outputs = run_replications(c.reps, c.threads, [&](std::size_t rep) {
            return progress(conjecture_rep(c, m, q, inf.value, rep));
        });
        extra_files.emplace_back("truth.csv", to_csv(mixture::density_table(m.truth)));
        extra_files.emplace_back("infimum.csv", to_csv(mixture::density_table(inf.minimizer)));
        break;
    }
    }

    ExperimentResult result;
    const auto headers = table_headers(c);
    std::vector<std::pair<std::string, std::string>> all_files;
    all_files.emplace_back("config.json", to_json(c).dump(2) + "\n");
    for (auto& out : outputs)
    {
        result.summary.insert(result.summary.end(), out.summary.begin(), out.summary.end());
        for (auto& [name, rows] : out.tables)
        {
            auto& table = result.tables[name];
            table.header = headers.at(name);
            table.rows.insert(table.rows.end(), rows.begin(), rows.end());
        }
        result.warnings.insert(result.warnings.end(), out.warnings.begin(), out.warnings.end());
        for (auto& f : out.files)
        {
            all_files.push_back(std::move(f));
        }
    }
    for (auto& f : extra_files)
    {
        all_files.push_back(std::move(f));
    }
    if (!result.summary.empty())
    {
        all_files.emplace_back("summary.csv", to_csv(summary_table(result.summary)));
    }
    for (const auto& [name, table] : result.tables)
    {
        all_files.emplace_back(name + ".csv", to_csv(table));
    }
    if (c.plots)
    {
        make_plots(c, result, all_files);
    }
    std::sort(all_files.begin(), all_files.end());
    for (const auto& [path, text] : all_files)
    {
        result.files.push_back(path);
    }
    if (files != nullptr)
    {
        *files = std::move(all_files);
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& c, const RunOptions& options)
{
    std::vector<std::pair<std::string, std::string>> files;
    auto result = compute_experiment(c, options, &files);
    const std::filesystem::path root(c.output);
    for (const auto& [path, text] : files)
    {
        write_text(root / path, text);
    }
    return result;
}

}  // namespace mixsa::exp
