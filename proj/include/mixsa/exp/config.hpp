#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixsa/core/weight_schedule.hpp"
#include "mixsa/mixture/grid.hpp"
#include "mixsa/mixture/kernel.hpp"

namespace mixsa::exp {

enum class ExperimentKind
{
    newton_finite,
    newton_compact,
    npp,
    compare,
    samc_ising,
    gallery,
    conjecture,
};

std::string to_string(ExperimentKind kind);

struct GridSpec
{
    std::string type = "integers";  ///< integers | trapezoid | points
    double lo = -4.0;
    double hi = 4.0;
    std::size_t points = 0;       ///< trapezoid only
    std::vector<double> values;   ///< points only

    mixture::ThetaGrid build() const;
};

struct KernelSpec
{
    std::string family = "normal";  ///< normal | poisson
    double sigma = 1.0;

    mixture::Kernel build() const;
};

struct DensitySpec
{
    std::string type = "uniform";  ///< uniform | binomial | atoms | beta
    int size = 0;
    double prob = 0.5;
    std::vector<double> thetas;
    std::vector<double> probs;
    double a = 1.0;
    double b = 1.0;

    mixture::MixingDensity build(const mixture::GridPtr& grid) const;
};

struct ScheduleSpec
{
    std::string type = "harmonic";  ///< harmonic | power | plateau
    double a = 1.0;
    double gamma = 1.0;
    double w0 = 0.1;
    double n0 = 100.0;

    core::WeightSchedule build() const;
};

struct GallerySpec
{
    double alpha = 0.75;
    double nu = 5.0;
    std::vector<double> starts{0.5, 0.75, 1.0};
    double xi = 1.0;
    double x0 = 1.5;
    double target_mean = 3.0;
    double target_sd = 2.0;
    double lambda = 0.3;
    double sigma = 1.0;
    std::vector<double> means{-3.0, 3.0};
    std::vector<double> init_means{-1.0, 1.0};
    std::size_t points = 200;
    std::size_t draws = 1;  ///< SAEM label vectors per iteration
};

struct ExperimentConfig
{
    ExperimentKind kind = ExperimentKind::newton_finite;
    std::string gallery_name;  ///< running-mean | t-quantile | eb | am | saem
    std::uint64_t seed = 20090205;
    std::size_t reps = 1;
    std::size_t n = 100;
    std::string output = "out";
    std::size_t stride = 0;  ///< 0 picks about 100 trace rows
    std::size_t threads = 1;
    bool timing = false;  ///< wall_ms is written as 0 unless set
    bool plots = true;

    GridSpec grid;
    KernelSpec kernel;
    DensitySpec truth;
    DensitySpec initial;
    std::optional<GridSpec> truth_grid;  ///< conjecture: support of the truth
    std::size_t replicates = 10;
    double variance = 1.5;

    ScheduleSpec schedule;

    std::string npp_estimator = "all";  ///< known | ube | bayes | all
    double npp_floor = 1e-4;
    double npp_xi0 = 1.0;

    std::size_t particles = 1000;
    double dp_alpha = 1.0;

    int spins = 10;
    std::vector<double> temperatures{1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};

    GallerySpec gallery;

    std::vector<std::size_t> checkpoints{100, 1000, 10000};

    std::size_t effective_stride() const;
};

/// Preset for an experiment kind ("gallery:<name>" selects a gallery driver).
ExperimentConfig default_config(const std::string& kind);

/// Overlays a JSON document on the preset selected by its "experiment" key
/// (or by `kind` when given). Unknown keys and wrong types raise ConfigError
/// naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& kind = {});
ExperimentConfig load_config(const std::string& path, const std::string& kind = {});

/// Full serialization; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Range and consistency checks; throws ConfigError.
void validate(const ExperimentConfig& config);

}  // namespace mixsa::exp
