#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mixsa/csv.hpp"
#include "mixsa/exp/config.hpp"
#include "mixsa/mixture/quadrature.hpp"

namespace mixsa::exp {

struct SummaryRecord
{
    std::size_t rep_id = 0;
    std::string estimator;
    double kl_theta = 0.0;     ///< NaN when the supports differ
    double kl_marginal = 0.0;
    double wall_ms = 0.0;
};

/// Everything one replication produces, kept in memory until the single
/// writer merges replications in rep_id order.
struct RepOutput
{
    std::vector<SummaryRecord> summary;
    /// Extra per-kind tables: name -> rows (headers are fixed per kind).
    std::map<std::string, std::vector<std::vector<std::string>>> tables;
    /// Relative path -> file contents.
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> warnings;
};

struct RunOptions
{
    bool quiet = false;
    std::ostream* log = nullptr;
};

struct ExperimentResult
{
    std::vector<SummaryRecord> summary;
    std::map<std::string, CsvTable> tables;
    std::vector<std::string> warnings;
    /// Written files, relative to the output directory, sorted.
    std::vector<std::string> files;
};

/// Runs every replication and writes config.json, per-rep traces, summary
/// tables and plots under config.output. Replication k draws from streams
/// split_seed(split_seed(seed, k), purpose), so adding replications leaves
/// earlier ones unchanged.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Same computation without touching the file system.
ExperimentResult compute_experiment(const ExperimentConfig& config, const RunOptions& options,
                                    std::vector<std::pair<std::string, std::string>>* files);

CsvTable summary_table(const std::vector<SummaryRecord>& records);

/// Runs fn(rep) for rep in [0, reps) on up to `threads` threads and returns
/// the outputs in rep order.
std::vector<RepOutput> run_replications(std::size_t reps, std::size_t threads,
                                        const std::function<RepOutput(std::size_t)>& fn);

/// Seed of a purpose-specific stream of one replication.
std::uint64_t rep_seed(std::uint64_t seed, std::size_t rep, std::uint64_t purpose);

/// Quadrature covering the marginals of densities on either grid.
mixture::XQuadrature shared_quadrature(const mixture::Kernel& kernel, const mixture::ThetaGrid& a,
                                       const mixture::ThetaGrid& b);

struct ConjectureInfimum
{
    mixture::MixingDensity minimizer;
    double value;
    std::size_t iterations;
};

/// inf over phi on `grid` of K(Pi_f, Pi_phi), by EM on the quadrature nodes
/// weighted by Pi_f (tolerance 1e-10).
ConjectureInfimum conjecture_infimum(const mixture::MixingDensity& f, const mixture::GridPtr& grid,
                                     const mixture::Kernel& kernel, const mixture::XQuadrature& q);

/// alpha-quantile of Student's t with nu degrees of freedom.
double t_quantile(double alpha, double nu);

}  // namespace mixsa::exp
