#include "qcluster/solver.hpp"

#include "qcluster/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qcluster {

bool reaches_optimum(double value, double optimum) {
    return value >= optimum - 1e-9 * std::max(1.0, std::abs(optimum));
}

SolveResult solve_maxcut_qaoa(const QaoaSimulator &sim, const QaoaSolveConfig &config, std::uint64_t seed,
                              std::optional<double> known_optimum) {
    if (config.p == 0 || config.shots == 0) {
        throw std::invalid_argument("QAOA solve needs p >= 1 and shots >= 1");
    }
    if (config.noise) {
        config.noise->validate(sim.n_qubits());
    }
    SolveResult result;
    const double total = sim.graph().total_weight();
    result.normalizer = known_optimum.value_or(total);
    if (!(result.normalizer > 0.0)) {
        result.normalizer = 1.0;
    }
    double gamma_scale = 1.0;
    if (config.rescale_gamma) {
        double max_weight = 0.0;
        for (const Edge &e : sim.graph().edges()) {
            max_weight = std::max(max_weight, e.weight);
        }
        if (max_weight > 0.0) {
            gamma_scale = 1.0 / max_weight;
        }
    }
    const std::uint64_t shot_stream = derive_seed(seed, 1);
    const std::uint64_t optimizer_stream = derive_seed(seed, 2);

    double historic = -1.0;
    bool found = false;
    auto objective = [&](std::span<const double> theta) {
        QaoaAngles angles = QaoaAngles::from_flat(theta);
        if (gamma_scale != 1.0) {
            std::vector<double> gammas = angles.gammas();
            for (double &g : gammas) {
                g *= gamma_scale;
            }
            angles = QaoaAngles(std::move(gammas), angles.betas());
        }
        const std::size_t step = result.records.size() + 1;
        const CostSample sample = evaluate_distribution(sim, angles, config.shots, derive_seed(shot_stream, step),
                                                        config.noise);
        const double best = best_statistic(sample);
        if (best > result.best_cost || result.records.empty()) {
            result.best_cost = best;
            result.best_bitstring = sample.best_bitstring;
        }
        historic = std::max(historic, best);
        TraceRecord record;
        record.step = step;
        record.gammas = angles.gammas();
        record.betas = angles.betas();
        record.best_cost = best;
        record.mean_cost = mean_statistic(sample);
        record.historic_best = historic;
        record.normalized_historic_best = historic / result.normalizer;
        result.records.push_back(std::move(record));
        if (config.keep_step_costs) {
            result.step_costs.push_back(sample.values);
        }
        if (known_optimum && !found && reaches_optimum(best, *known_optimum)) {
            found = true;
            result.time_to_optimum = step;
        }
        return objective_statistic(sample, config.statistic) / result.normalizer;
    };
    auto stop = [&](const OptimizationStep &) { return config.early_stop && found; };

    OptimizerConfig optimizer = config.optimizer;
    optimizer.target.reset();
    const OptimizationTrace trace = optimize(objective, 2 * config.p, optimizer, optimizer_stream, stop);
    result.error = trace.error;
    return result;
}

} // namespace qcluster
