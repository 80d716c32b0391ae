// Command-line front end for the experiment runner.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mixsa/csv.hpp"
#include "mixsa/error.hpp"
#include "mixsa/exp/config.hpp"
#include "mixsa/exp/experiment.hpp"
#include "mixsa/exp/plot.hpp"

namespace {

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::size_t> reps;
    std::optional<std::size_t> n;
    std::optional<std::size_t> threads;
    bool quiet = false;
    bool timing = false;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "master seed (u64)");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--reps", c.reps, "number of replications");
    sub->add_option("--n", c.n, "iterations / sample size");
    sub->add_option("--threads", c.threads, "replications run concurrently");
    sub->add_flag("--timing", c.timing, "record wall_ms (breaks byte-identical reruns)");
    sub->add_flag("--quiet", c.quiet, "no progress output");
}

int run(const std::string& kind, const Common& c)
{
    mixsa::exp::ExperimentConfig cfg =
        c.config.empty() ? mixsa::exp::default_config(kind) : mixsa::exp::load_config(c.config, kind);
    if (c.seed)
    {
        cfg.seed = *c.seed;
    }
    if (!c.out.empty())
    {
        cfg.output = c.out;
    }
    if (c.reps)
    {
        cfg.reps = *c.reps;
    }
    if (c.n)
    {
        cfg.n = *c.n;
    }
    if (c.threads)
    {
        cfg.threads = *c.threads;
    }
    if (c.timing)
    {
        cfg.timing = true;
    }
    mixsa::exp::validate(cfg);

    mixsa::exp::RunOptions options;
    options.quiet = c.quiet;
    const auto result = mixsa::exp::run_experiment(cfg, options);
    for (const auto& w : result.warnings)
    {
        std::cerr << "warning: " << w << '\n';
    }
    if (!c.quiet)
    {
        std::cerr << fmt::format("wrote {} files under {}\n", result.files.size(), cfg.output);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mixsa: recursive mixing-density estimation and stochastic approximation experiments"};
    app.require_subcommand(1);

    Common common;
    std::string gallery_name;

    struct Entry
    {
        const char* name;
        const char* kind;
        const char* help;
    };
    const Entry entries[] = {
        {"newton", "newton", "Newton's recursive estimate on a finite grid (newton-compact via config)"},
        {"npp", "npp", "N+P with known, unbiased and Bayes variance plug-ins"},
        {"compare", "compare", "Newton vs NPML (EM) vs nonparametric Bayes (sequential imputation)"},
        {"samc-ising", "samc-ising", "SAMC density of states for the 1-D Ising chain"},
        {"conjecture", "conjecture", "misspecified-grid run against the KL infimum"},
    };
    std::string chosen_kind;
    for (const auto& e : entries)
    {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common);
        sub->callback([&chosen_kind, kind = std::string(e.kind)] { chosen_kind = kind; });
    }
    auto* gallery = app.add_subcommand("gallery", "worked SA examples");
    gallery->add_option("name", gallery_name, "running-mean | t-quantile | eb | am | saem")->required();
    add_common(gallery, common);
    gallery->callback([&] { chosen_kind = "gallery:" + gallery_name; });

    std::string plot_in;
    std::string plot_out;
    mixsa::exp::PlotRequest request;
    bool box = false;
    bool log_y = false;
    auto* plot = app.add_subcommand("plot", "render a CSV as an SVG line or box plot");
    plot->add_option("--input", plot_in, "CSV file")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "SVG file to write")->required();
    plot->add_flag("--box", box, "box plot grouped by --group instead of a line plot");
    plot->add_option("--x", request.x, "abscissa column (line plot)");
    plot->add_option("--y", request.y, "ordinate columns (line plot; default all)");
    plot->add_option("--group", request.group, "grouping column (box plot)");
    plot->add_option("--value", request.value, "value column (box plot)");
    plot->add_option("--hline", request.spec.reference_lines, "horizontal reference lines");
    plot->add_option("--title", request.spec.title, "plot title");
    plot->add_flag("--log-y", log_y, "log10 ordinate");
    plot->add_flag("--quiet", common.quiet, "no output");
    plot->callback([&] { chosen_kind = "plot"; });

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (chosen_kind == "plot")
        {
            request.kind = box ? mixsa::exp::PlotRequest::Kind::box : mixsa::exp::PlotRequest::Kind::line;
            request.spec.log_y = log_y;
            request.spec.xlabel = box ? request.group : request.x;
            request.spec.ylabel = box ? request.value : "value";
            mixsa::exp::emit_plot(mixsa::read_csv(plot_in), request, plot_out);
            return 0;
        }
        return run(chosen_kind, common);
    }
    catch (const mixsa::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    catch (const mixsa::NumericError& e)
    {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
