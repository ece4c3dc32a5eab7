#pragma once

#include "qcluster/clustering.hpp"
#include "qcluster/graph.hpp"
#include "qcluster/hypothesis.hpp"
#include "qcluster/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qcluster {

/// Where the problem instances of an experiment come from.
struct GraphSource {
    enum class Kind {
        topology_19q,      ///< 19-qubit coupler graph, uniform (0,1] weights
        file,              ///< graph JSON file, used as-is
        gaussian_clusters, ///< two Gaussian point clouds, Euclidean weights
    };

    Kind kind = Kind::topology_19q;
    std::uint64_t weight_seed = 1;
    std::filesystem::path path;
    std::size_t points_per_cluster = 10;
    double separation = 6.0;
    double radius = 1.0;
};

struct ExperimentConfig {
    std::string name = "default";
    GraphSource graph;
    /// Distinct random instances; run r uses instance r % instances.
    std::size_t instances = 1;
    std::size_t runs = 20;
    std::uint64_t master_seed = 7;
    QaoaSolveConfig solve;
    /// Use the device characterisation noise ("noise": "table-s1"); resolved
    /// per instance since it depends on the qubit count.
    bool device_noise = false;
    /// 0 = one per hardware thread.
    std::size_t workers = 0;
    bool export_step_costs = true;

    std::size_t budget() const { return solve.optimizer.budget; }
};

/// Named starting points: "default" (19-qubit instance, 2500 shots, 55
/// steps), "randomized-instances" (same, five weight seeds) and "fc20"
/// (20-point two-cluster dataset, 250 shots).
ExperimentConfig experiment_preset(std::string_view name);

/// Reads the config JSON (schema in docs/CONFIG.md). A "preset" key selects
/// the starting point; every other key overrides it. Relative file paths
/// resolve against `base_dir`. All problems are collected into one
/// ConfigError, each prefixed with its JSON path.
ExperimentConfig parse_experiment_config(const nlohmann::json &doc, const std::filesystem::path &base_dir = {});
nlohmann::json experiment_config_to_json(const ExperimentConfig &config);

struct ProblemInstance {
    WeightedGraph graph;
    MaxcutSolution optimum;
    std::size_t optimal_count = 0;
    /// Ground-truth clustering for generated point data.
    std::optional<LabelAssignment> truth;
    /// Whether the ground-truth split is itself a maximum cut.
    std::optional<bool> truth_is_optimal;
};

std::vector<ProblemInstance> build_instances(const ExperimentConfig &config);

struct RunTrace {
    std::size_t run = 0;
    std::size_t instance = 0;
    SolveResult result;
    /// Whether the best string found equals the ground-truth clustering.
    std::optional<bool> labels_recovered;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ProblemInstance> instances;
    std::vector<RunTrace> runs;
};

/// Executes config.runs independent solves across a worker pool. Run r is
/// seeded with derive_seed(master_seed, r), so results do not depend on the
/// worker count.
ExperimentResult run_experiment(const ExperimentConfig &config);

struct KsComparison {
    std::string name;
    double ks = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    double alpha = 0.0;
};

/// Time-to-optimum statistics and the comparisons against random sampling.
struct ExperimentAnalysis {
    std::vector<double> time_to_optimum; ///< +inf for censored runs
    std::size_t successes = 0;
    std::size_t budget = 0;
    std::size_t shots = 0;
    double p_success = 0.0;
    std::vector<double> ecdf;                 ///< steps 0..budget
    std::vector<double> null_cdf;             ///< analytic, steps 0..budget
    std::vector<double> empirical_random_cdf; ///< simulated random sampling
    std::vector<KsComparison> comparisons;
};

/// `time_to_optimum` uses +inf for censored runs. The simulated
/// random-sampling curve draws as many runs, seeded from `seed`.
ExperimentAnalysis analyze_times(std::vector<double> time_to_optimum, std::size_t budget, std::size_t shots,
                                 double p_success, std::uint64_t seed);

ExperimentAnalysis analyze(const ExperimentResult &result);

/// Writes traces.csv, ecdf.csv, null_cdf.csv, ks_report.json,
/// per_step_costs.csv and summary.json into `out_dir` (created if needed).
void emit_outputs(const ExperimentResult &result, const std::filesystem::path &out_dir);

/// Time-to-optimum per run recovered from a traces.csv file: the first step
/// whose normalized historic best reaches 1. Runs are ordered by id.
std::vector<double> times_from_traces_csv(const std::string &csv_text);

nlohmann::json ks_report_json(const ExperimentAnalysis &analysis);

} // namespace qcluster
