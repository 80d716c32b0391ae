#include "mixsa/exp/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mixsa/error.hpp"

namespace mixsa::exp {

using nlohmann::json;

std::string to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::newton_finite:
        return "newton-finite";
    case ExperimentKind::newton_compact:
        return "newton-compact";
    case ExperimentKind::npp:
        return "npp";
    case ExperimentKind::compare:
        return "compare";
    case ExperimentKind::samc_ising:
        return "samc-ising";
    case ExperimentKind::gallery:
        return "gallery";
    case ExperimentKind::conjecture:
        return "conjecture";
    }
    return {};
}

mixture::ThetaGrid GridSpec::build() const
{
    if (type == "integers")
    {
        return mixture::ThetaGrid::integers(static_cast<int>(lo), static_cast<int>(hi));
    }
    if (type == "trapezoid")
    {
        return mixture::ThetaGrid::trapezoid(lo, hi, points);
    }
    if (type == "points")
    {
        return mixture::ThetaGrid::counting(values);
    }
    throw ConfigError(fmt::format("grid.type: unknown grid type '{}'", type));
}

mixture::Kernel KernelSpec::build() const
{
    if (family == "normal")
    {
        return mixture::Kernel::normal(sigma);
    }
    if (family == "poisson")
    {
        return mixture::Kernel::poisson();
    }
    throw ConfigError(fmt::format("kernel.family: unknown family '{}'", family));
}

mixture::MixingDensity DensitySpec::build(const mixture::GridPtr& grid) const
{
    using mixture::MixingDensity;
    if (type == "uniform")
    {
        return MixingDensity::uniform(grid);
    }
    if (type == "binomial")
    {
        return MixingDensity::binomial(grid, size, prob);
    }
    if (type == "atoms")
    {
        return MixingDensity::atoms(grid, thetas, probs);
    }
    if (type == "beta")
    {
        return MixingDensity::beta(grid, a, b);
    }
    throw ConfigError(fmt::format("density type '{}' is not one of uniform, binomial, atoms, beta", type));
}

core::WeightSchedule ScheduleSpec::build() const
{
    if (type == "harmonic")
    {
        return core::WeightSchedule::harmonic();
    }
    if (type == "power")
    {
        return core::WeightSchedule::power(a, gamma);
    }
    if (type == "plateau")
    {
        return core::WeightSchedule::plateau(w0, n0);
    }
    throw ConfigError(fmt::format("schedule.type: unknown schedule '{}'", type));
}

std::size_t ExperimentConfig::effective_stride() const
{
    return stride > 0 ? stride : std::max<std::size_t>(1, n / 100);
}

ExperimentConfig default_config(const std::string& kind)
{
    ExperimentConfig c;
    c.truth.type = "binomial";
    c.truth.size = 8;
    c.truth.prob = 0.6;
    if (kind == "newton" || kind == "newton-finite")
    {
        c.kind = ExperimentKind::newton_finite;
    }
    else if (kind == "newton-compact")
    {
        c.kind = ExperimentKind::newton_compact;
        c.grid = {"trapezoid", 0.0, 1.0, 201, {}};
        c.kernel.sigma = 0.1;
        c.truth = {};
        c.truth.type = "beta";
        c.truth.a = 2.0;
        c.truth.b = 7.0;
    }
    else if (kind == "npp")
    {
        c.kind = ExperimentKind::npp;
        c.truth.prob = 0.5;
    }
    else if (kind == "compare")
    {
        c.kind = ExperimentKind::compare;
    }
    else if (kind == "samc-ising")
    {
        c.kind = ExperimentKind::samc_ising;
        c.n = 100000;
        c.schedule = {"plateau", 1.0, 1.0, 0.1, 100.0};
    }
    else if (kind.rfind("gallery:", 0) == 0)
    {
        c.kind = ExperimentKind::gallery;
        c.gallery_name = kind.substr(8);
        static const std::set<std::string> names{"running-mean", "t-quantile", "eb", "am", "saem"};
        if (!names.contains(c.gallery_name))
        {
            throw ConfigError(fmt::format(
                "gallery: unknown driver '{}' (running-mean, t-quantile, eb, am, saem)", c.gallery_name));
        }
        c.n = c.gallery_name == "am" ? 100000 : c.gallery_name == "saem" ? 2000 : 10000;
        if (c.gallery_name == "t-quantile" || c.gallery_name == "eb")
        {
            c.schedule = {"plateau", 1.0, 1.0, 0.1, 2.0};
        }
        if (c.gallery_name == "running-mean")
        {
            c.schedule = {"power", 1.0, 1.0, 0.1, 100.0};
        }
    }
    else if (kind == "conjecture")
    {
        c.kind = ExperimentKind::conjecture;
        c.grid = {"points", 0.0, 0.0, 0, {-0.5, 0.5}};
        c.truth_grid = GridSpec{"points", 0.0, 0.0, 0, {0.0}};
        c.truth = {};
        c.n = 10000;
        c.reps = 10;
    }
    else
    {
        throw ConfigError(fmt::format("experiment: unknown kind '{}'", kind));
    }
    return c;
}

namespace {

/// Reads fields from one JSON object and rejects keys it never asked for.
class Reader
{
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
        {
            throw ConfigError(fmt::format("{}: expected an object", where()));
        }
    }

    template <typename T>
    void get(const std::string& key, T& out)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        if (it == obj_.end())
        {
            return;
        }
        try
        {
            check_kind<T>(*it, key);
            out = it->template get<T>();
        }
        catch (const json::exception& e)
        {
            throw ConfigError(fmt::format("{}: {}", field(key), e.what()));
        }
    }

    bool has(const std::string& key) const { return obj_.contains(key); }

    const json& child(const std::string& key)
    {
        seen_.insert(key);
        return obj_.at(key);
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const
    {
        for (const auto& item : obj_.items())
        {
            if (!seen_.contains(item.key()))
            {
                throw ConfigError(fmt::format("{}: unknown key", field(item.key())));
            }
        }
    }

private:
    std::string where() const { return path_.empty() ? "config" : path_; }

    template <typename T>
    void check_kind(const json& v, const std::string& key) const
    {
        bool ok = true;
        if constexpr (std::is_same_v<T, bool>)
        {
            ok = v.is_boolean();
        }
        else if constexpr (std::is_same_v<T, std::string>)
        {
            ok = v.is_string();
        }
        else if constexpr (std::is_integral_v<T>)
        {
            ok = v.is_number_unsigned() || (v.is_number_integer() && (std::is_signed_v<T> || v.get<long long>() >= 0));
        }
        else if constexpr (std::is_floating_point_v<T>)
        {
            ok = v.is_number();
        }
        else
        {
            ok = v.is_array();
        }
        if (!ok)
        {
            throw ConfigError(fmt::format("{}: wrong type ({})", field(key), v.type_name()));
        }
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_grid(const json& doc, const std::string& path, GridSpec& g)
{
    Reader r(doc, path);
    r.get("type", g.type);
    r.get("lo", g.lo);
    r.get("hi", g.hi);
    r.get("points", g.points);
    r.get("values", g.values);
    r.finish();
}

void read_density(const json& doc, const std::string& path, DensitySpec& d)
{
    Reader r(doc, path);
    r.get("type", d.type);
    r.get("size", d.size);
    r.get("prob", d.prob);
    r.get("thetas", d.thetas);
    r.get("probs", d.probs);
    r.get("a", d.a);
    r.get("b", d.b);
    r.finish();
}

json grid_json(const GridSpec& g)
{
    return {{"type", g.type}, {"lo", g.lo}, {"hi", g.hi}, {"points", g.points}, {"values", g.values}};
}

json density_json(const DensitySpec& d)
{
    return {{"type", d.type},   {"size", d.size}, {"prob", d.prob}, {"thetas", d.thetas},
            {"probs", d.probs}, {"a", d.a},       {"b", d.b}};
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::string& kind)
{
    if (!doc.is_object())
    {
        throw ConfigError("config: top level must be an object");
    }
    std::string chosen = kind;
    if (doc.contains("experiment"))
    {
        if (!doc["experiment"].is_string())
        {
            throw ConfigError("experiment: wrong type");
        }
        const std::string named = doc["experiment"].get<std::string>();
        const bool compatible = chosen.empty() || chosen == named ||
                                (chosen == "newton" && named.rfind("newton", 0) == 0) ||
                                (chosen == "gallery" && named.rfind("gallery:", 0) == 0);
        if (!compatible)
        {
            throw ConfigError(fmt::format(
                "experiment: config describes '{}' but the '{}' subcommand was used", named, chosen));
        }
        chosen = named;
    }
    if (chosen.empty())
    {
        throw ConfigError("experiment: missing experiment kind");
    }
    ExperimentConfig c = default_config(chosen);

    Reader top(doc, "");
    std::string ignored;
    top.get("experiment", ignored);
    top.get("seed", c.seed);
    top.get("reps", c.reps);
    top.get("n", c.n);
    top.get("output", c.output);
    top.get("stride", c.stride);
    top.get("threads", c.threads);
    top.get("timing", c.timing);
    top.get("plots", c.plots);

    if (top.has("model"))
    {
        Reader m(top.child("model"), "model");
        if (m.has("grid"))
        {
            read_grid(m.child("grid"), "model.grid", c.grid);
        }
        if (m.has("kernel"))
        {
            Reader k(m.child("kernel"), "model.kernel");
            k.get("family", c.kernel.family);
            k.get("sigma", c.kernel.sigma);
            k.finish();
        }
        if (m.has("truth"))
        {
            read_density(m.child("truth"), "model.truth", c.truth);
        }
        if (m.has("initial"))
        {
            read_density(m.child("initial"), "model.initial", c.initial);
        }
        if (m.has("truth_grid"))
        {
            const json& tg = m.child("truth_grid");
            if (tg.is_null())
            {
                c.truth_grid.reset();
            }
            else
            {
                GridSpec g = c.truth_grid.value_or(GridSpec{});
                read_grid(tg, "model.truth_grid", g);
                c.truth_grid = g;
            }
        }
        m.get("replicates", c.replicates);
        m.get("variance", c.variance);
        m.finish();
    }
    if (top.has("schedule"))
    {
        Reader s(top.child("schedule"), "schedule");
        s.get("type", c.schedule.type);
        s.get("a", c.schedule.a);
        s.get("gamma", c.schedule.gamma);
        s.get("w0", c.schedule.w0);
        s.get("n0", c.schedule.n0);
        s.finish();
    }
    if (top.has("npp"))
    {
        Reader s(top.child("npp"), "npp");
        s.get("estimator", c.npp_estimator);
        s.get("floor", c.npp_floor);
        s.get("xi0", c.npp_xi0);
        s.finish();
    }
    if (top.has("baselines"))
    {
        Reader s(top.child("baselines"), "baselines");
        s.get("particles", c.particles);
        s.get("alpha", c.dp_alpha);
        s.finish();
    }
    if (top.has("samc"))
    {
        Reader s(top.child("samc"), "samc");
        s.get("spins", c.spins);
        s.get("temperatures", c.temperatures);
        s.finish();
    }
    if (top.has("gallery"))
    {
        Reader s(top.child("gallery"), "gallery");
        auto& g = c.gallery;
        s.get("alpha", g.alpha);
        s.get("nu", g.nu);
        s.get("starts", g.starts);
        s.get("xi", g.xi);
        s.get("x0", g.x0);
        s.get("target_mean", g.target_mean);
        s.get("target_sd", g.target_sd);
        s.get("lambda", g.lambda);
        s.get("sigma", g.sigma);
        s.get("means", g.means);
        s.get("init_means", g.init_means);
        s.get("points", g.points);
        s.get("draws", g.draws);
        s.finish();
    }
    if (top.has("conjecture"))
    {
        Reader s(top.child("conjecture"), "conjecture");
        s.get("checkpoints", c.checkpoints);
        s.finish();
    }
    top.finish();
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::string& kind)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open config file '{}'", path));
    }
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(fmt::format("{}: {}", path, e.what()));
    }
    return parse_config(doc, kind);
}

json to_json(const ExperimentConfig& c)
{
    json doc;
    doc["experiment"] =
        c.kind == ExperimentKind::gallery ? "gallery:" + c.gallery_name : to_string(c.kind);
    doc["seed"] = c.seed;
    doc["reps"] = c.reps;
    doc["n"] = c.n;
    doc["output"] = c.output;
    doc["stride"] = c.stride;
    doc["threads"] = c.threads;
    doc["timing"] = c.timing;
    doc["plots"] = c.plots;
    doc["model"] = {{"grid", grid_json(c.grid)},
                    {"kernel", {{"family", c.kernel.family}, {"sigma", c.kernel.sigma}}},
                    {"truth", density_json(c.truth)},
                    {"initial", density_json(c.initial)},
                    {"truth_grid", c.truth_grid ? grid_json(*c.truth_grid) : json(nullptr)},
                    {"replicates", c.replicates},
                    {"variance", c.variance}};
    doc["schedule"] = {{"type", c.schedule.type},
                       {"a", c.schedule.a},
                       {"gamma", c.schedule.gamma},
                       {"w0", c.schedule.w0},
                       {"n0", c.schedule.n0}};
    doc["npp"] = {{"estimator", c.npp_estimator}, {"floor", c.npp_floor}, {"xi0", c.npp_xi0}};
    doc["baselines"] = {{"particles", c.particles}, {"alpha", c.dp_alpha}};
    doc["samc"] = {{"spins", c.spins}, {"temperatures", c.temperatures}};
    const auto& g = c.gallery;
    doc["gallery"] = {{"alpha", g.alpha},
                      {"nu", g.nu},
                      {"starts", g.starts},
                      {"xi", g.xi},
                      {"x0", g.x0},
                      {"target_mean", g.target_mean},
                      {"target_sd", g.target_sd},
                      {"lambda", g.lambda},
                      {"sigma", g.sigma},
                      {"means", g.means},
                      {"init_means", g.init_means},
                      {"points", g.points},
                      {"draws", g.draws}};
    doc["conjecture"] = {{"checkpoints", c.checkpoints}};
    return doc;
}

void validate(const ExperimentConfig& c)
{
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError(fmt::format("{}: {}", field, why));
    };
    if (c.reps == 0)
    {
        fail("reps", "must be at least 1");
    }
    if (c.n == 0)
    {
        fail("n", "must be at least 1");
    }
    if (c.threads == 0)
    {
        fail("threads", "must be at least 1");
    }
    if (c.output.empty())
    {
        fail("output", "must name a directory");
    }
    // Build every model part once so that bad values surface as config errors.
    try
    {
        (void)c.schedule.build();
        if (c.kind != ExperimentKind::samc_ising && c.kind != ExperimentKind::gallery)
        {
            const auto grid = mixture::share(c.grid.build());
            (void)c.kernel.build();
            (void)c.initial.build(grid);
            if (c.truth_grid)
            {
                (void)c.truth.build(mixture::share(c.truth_grid->build()));
            }
            else
            {
                (void)c.truth.build(grid);
            }
        }
    }
    catch (const ConfigError&)
    {
        throw;
    }
    catch (const std::exception& e)
    {
        throw ConfigError(fmt::format("model: {}", e.what()));
    }
    if (c.kind == ExperimentKind::npp)
    {
        static const std::set<std::string> names{"known", "ube", "bayes", "all"};
        if (!names.contains(c.npp_estimator))
        {
            fail("npp.estimator", "must be known, ube, bayes or all");
        }
        if (c.replicates < 2)
        {
            fail("model.replicates", "N+P needs at least 2 replicates per row");
        }
        if (!(c.variance > 0.0))
        {
            fail("model.variance", "must be positive");
        }
        if (c.kernel.family != "normal")
        {
            fail("model.kernel.family", "N+P supports the normal kernel only");
        }
    }
    if (c.kind == ExperimentKind::compare && c.particles == 0)
    {
        fail("baselines.particles", "must be at least 1");
    }
    if (c.kind == ExperimentKind::compare && !(c.dp_alpha > 0.0))
    {
        fail("baselines.alpha", "must be positive");
    }
    if (c.kind == ExperimentKind::samc_ising)
    {
        if (c.spins < 2 || c.spins > 24)
        {
            fail("samc.spins", "must lie in [2, 24]");
        }
        if (c.temperatures.empty() ||
            std::any_of(c.temperatures.begin(), c.temperatures.end(), [](double t) { return !(t > 0.0); }))
        {
            fail("samc.temperatures", "need at least one positive temperature");
        }
    }
    if (c.kind == ExperimentKind::conjecture && !c.truth_grid)
    {
        fail("model.truth_grid", "conjecture needs the support of the true density");
    }
    if (c.kind == ExperimentKind::gallery)
    {
        const auto& g = c.gallery;
        if (g.means.size() != 2 || g.init_means.size() != 2)
        {
            fail("gallery.means", "the SAEM toy has exactly two components");
        }
        if (g.starts.empty())
        {
            fail("gallery.starts", "need at least one starting value");
        }
        if (g.draws == 0 || g.points == 0)
        {
            fail("gallery", "draws and points must be positive");
        }
    }
}

}  // namespace mixsa::exp
