#pragma once

#include "qcluster/bayes_opt.hpp"
#include "qcluster/graph.hpp"
#include "qcluster/sampling_stats.hpp"
#include "qcluster/statevector.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcluster {

/// Settings of one Bayesian-optimised QAOA Maxcut solve.
struct QaoaSolveConfig {
    std::size_t p = 1;
    std::size_t shots = 2500;
    Statistic statistic = Statistic::max;
    /// Kernel, acquisition and budget. `optimizer.target` is ignored; the
    /// solver stops on the known optimum when `early_stop` is set.
    OptimizerConfig optimizer;
    bool early_stop = true;
    /// The optimizer searches gamma for the graph with weights divided by the
    /// largest weight; the angle applied to the graph is gamma / w_max. Traces
    /// record the applied angle.
    bool rescale_gamma = true;
    std::optional<NoiseModel> noise;
    /// Keep every shot's cost per step (violin-plot source data).
    bool keep_step_costs = false;
};

/// One optimizer step as published in traces.csv.
struct TraceRecord {
    std::size_t step = 0; ///< 1-based
    std::vector<double> gammas;
    std::vector<double> betas;
    double best_cost = 0.0;
    double mean_cost = 0.0;
    double historic_best = 0.0;
    double normalized_historic_best = 0.0;
};

struct SolveResult {
    std::vector<TraceRecord> records;
    BitString best_bitstring;
    double best_cost = 0.0;
    /// Reference value the costs were normalised by.
    double normalizer = 1.0;
    /// First step whose sample contained an optimal string; empty if the
    /// optimum was never sampled or is unknown.
    std::optional<std::size_t> time_to_optimum;
    std::vector<std::vector<double>> step_costs;
    std::optional<std::string> error;
};

/// Angle-space optimisation of the sampled cost statistic.
///
/// Each step samples `shots` strings at the proposed angles, feeds the chosen
/// statistic divided by the normaliser to the GP, and records the best and
/// mean cost. The normaliser is `known_optimum` when given, otherwise the
/// total edge weight (an upper bound on any cut).
SolveResult solve_maxcut_qaoa(const QaoaSimulator &sim, const QaoaSolveConfig &config, std::uint64_t seed,
                              std::optional<double> known_optimum = std::nullopt);

/// True when `value` equals `optimum` up to 1e-9 relative.
bool reaches_optimum(double value, double optimum);

} // namespace qcluster
