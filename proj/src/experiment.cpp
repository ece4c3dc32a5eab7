#include "qcluster/experiment.hpp"

#include "qcluster/errors.hpp"
#include "qcluster/graph_io.hpp"
#include "qcluster/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace qcluster {

ExperimentConfig experiment_preset(std::string_view name) {
    ExperimentConfig config;
    config.solve.p = 1;
    config.solve.shots = 2500;
    config.solve.optimizer.budget = 55;
    if (name == "default") {
        config.name = "default";
    } else if (name == "randomized-instances") {
        config.name = "randomized-instances";
        config.instances = 5;
    } else if (name == "fc20") {
        config.name = "fc20";
        config.graph.kind = GraphSource::Kind::gaussian_clusters;
        config.graph.points_per_cluster = 10;
        config.graph.separation = 6.0;
        config.graph.radius = 1.0;
        config.runs = 10;
        config.solve.shots = 250;
    } else {
        throw ConfigError({"preset: unknown preset \"" + std::string(name) + "\""});
    }
    return config;
}

namespace {

// Collects every problem in a config document instead of stopping at the first.
class ConfigReader {
public:
    std::vector<std::string> problems;

    void fail(const std::string &path, const std::string &message) { problems.push_back(path + ": " + message); }

    void check_keys(const nlohmann::json &obj, const std::string &path, const std::set<std::string> &allowed) {
        for (const auto &[key, value] : obj.items()) {
            if (!allowed.contains(key)) {
                fail(path + "." + key, "unknown field");
            }
        }
    }

    template <typename T>
    void read_uint(const nlohmann::json &obj, const std::string &key, const std::string &path, T &out,
                   std::uint64_t min_value = 0) {
        if (!obj.contains(key)) {
            return;
        }
        const auto &v = obj.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0 && !v.is_number_unsigned())) {
            fail(path + "." + key, "expected a non-negative integer");
            return;
        }
        const auto value = v.get<std::uint64_t>();
        if (value < min_value) {
            fail(path + "." + key, "must be at least " + std::to_string(min_value));
            return;
        }
        out = static_cast<T>(value);
    }

    void read_double(const nlohmann::json &obj, const std::string &key, const std::string &path, double &out,
                     bool positive = false, bool non_negative = false) {
        if (!obj.contains(key)) {
            return;
        }
        const auto &v = obj.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "expected a number");
            return;
        }
        const double value = v.get<double>();
        if (!std::isfinite(value) || (positive && !(value > 0.0)) || (non_negative && !(value >= 0.0))) {
            fail(path + "." + key, positive ? "must be positive" : "must be non-negative and finite");
            return;
        }
        out = value;
    }

    void read_bool(const nlohmann::json &obj, const std::string &key, const std::string &path, bool &out) {
        if (!obj.contains(key)) {
            return;
        }
        if (!obj.at(key).is_boolean()) {
            fail(path + "." + key, "expected true or false");
            return;
        }
        out = obj.at(key).get<bool>();
    }
};

} // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json &doc, const std::filesystem::path &base_dir) {
    if (!doc.is_object()) {
        throw ConfigError({"$: configuration must be a JSON object"});
    }
    ExperimentConfig config;
    ConfigReader r;
    if (doc.contains("preset")) {
        if (!doc.at("preset").is_string()) {
            throw ConfigError({"$.preset: expected a string"});
        }
        config = experiment_preset(doc.at("preset").get<std::string>());
    } else {
        config = experiment_preset("default");
    }
    r.check_keys(doc, "$",
                 {"preset", "name", "graph", "instances", "runs", "master_seed", "p", "shots", "budget", "statistic",
                  "early_stop", "rescale_gamma", "noise", "optimizer", "workers", "export_step_costs"});

    if (doc.contains("name")) {
        if (doc.at("name").is_string()) {
            config.name = doc.at("name").get<std::string>();
        } else {
            r.fail("$.name", "expected a string");
        }
    }

    if (doc.contains("graph")) {
        const auto &g = doc.at("graph");
        if (!g.is_object()) {
            r.fail("$.graph", "expected an object");
        } else {
            r.check_keys(g, "$.graph",
                         {"source", "weight_seed", "path", "points_per_cluster", "separation", "radius"});
            if (g.contains("source")) {
                const auto source = g.at("source").is_string() ? g.at("source").get<std::string>() : "";
                if (source == "topology19q") {
                    config.graph.kind = GraphSource::Kind::topology_19q;
                } else if (source == "file") {
                    config.graph.kind = GraphSource::Kind::file;
                } else if (source == "gaussian_clusters") {
                    config.graph.kind = GraphSource::Kind::gaussian_clusters;
                } else {
                    r.fail("$.graph.source", "expected \"topology19q\", \"file\" or \"gaussian_clusters\"");
                }
            }
            r.read_uint(g, "weight_seed", "$.graph", config.graph.weight_seed);
            if (g.contains("path")) {
                if (g.at("path").is_string()) {
                    std::filesystem::path path = g.at("path").get<std::string>();
                    config.graph.path = path.is_relative() && !base_dir.empty() ? base_dir / path : path;
                } else {
                    r.fail("$.graph.path", "expected a string");
                }
            }
            r.read_uint(g, "points_per_cluster", "$.graph", config.graph.points_per_cluster, 1);
            r.read_double(g, "separation", "$.graph", config.graph.separation, true);
            r.read_double(g, "radius", "$.graph", config.graph.radius, true);
            if (config.graph.kind == GraphSource::Kind::file && config.graph.path.empty()) {
                r.fail("$.graph.path", "required when source is \"file\"");
            }
            if (config.graph.kind == GraphSource::Kind::gaussian_clusters &&
                2 * config.graph.points_per_cluster > kMaxQubits) {
                r.fail("$.graph.points_per_cluster", "at most " + std::to_string(kMaxQubits / 2) + " per cluster");
            }
        }
    }

    r.read_uint(doc, "instances", "$", config.instances, 1);
    r.read_uint(doc, "runs", "$", config.runs);
    r.read_uint(doc, "master_seed", "$", config.master_seed);
    r.read_uint(doc, "p", "$", config.solve.p, 1);
    r.read_uint(doc, "shots", "$", config.solve.shots, 1);
    r.read_uint(doc, "budget", "$", config.solve.optimizer.budget, 1);
    r.read_bool(doc, "early_stop", "$", config.solve.early_stop);
    r.read_bool(doc, "rescale_gamma", "$", config.solve.rescale_gamma);
    r.read_uint(doc, "workers", "$", config.workers);
    r.read_bool(doc, "export_step_costs", "$", config.export_step_costs);

    if (doc.contains("statistic")) {
        const auto &s = doc.at("statistic");
        const std::string name = s.is_string() ? s.get<std::string>() : "";
        if (name == "max") {
            config.solve.statistic = Statistic::max;
        } else if (name == "mean") {
            config.solve.statistic = Statistic::mean;
        } else if (name == "expected_max") {
            config.solve.statistic = Statistic::expected_max;
        } else {
            r.fail("$.statistic", "expected \"max\", \"mean\" or \"expected_max\"");
        }
    }

    if (doc.contains("noise")) {
        const auto &n = doc.at("noise");
        config.device_noise = false;
        config.solve.noise.reset();
        if (n.is_null() || (n.is_string() && n.get<std::string>() == "none")) {
            // noiseless
        } else if (n.is_string() && n.get<std::string>() == "table-s1") {
            config.device_noise = true;
        } else if (n.is_object()) {
            r.check_keys(n, "$.noise", {"readout_flip_prob", "depolarizing_prob_2q", "trajectories"});
            NoiseModel model;
            if (n.contains("readout_flip_prob")) {
                const auto &ro = n.at("readout_flip_prob");
                if (ro.is_number()) {
                    model.readout_flip_prob = {ro.get<double>()};
                } else if (ro.is_array() && std::all_of(ro.begin(), ro.end(), [](const auto &x) { return x.is_number(); })) {
                    model.readout_flip_prob = ro.get<std::vector<double>>();
                } else {
                    r.fail("$.noise.readout_flip_prob", "expected a number or an array of numbers");
                }
                for (double p : model.readout_flip_prob) {
                    if (!(p >= 0.0 && p <= 0.5)) {
                        r.fail("$.noise.readout_flip_prob", "probabilities must lie in [0, 0.5]");
                        break;
                    }
                }
            }
            r.read_double(n, "depolarizing_prob_2q", "$.noise", model.depolarizing_prob_2q, false, true);
            if (model.depolarizing_prob_2q > 1.0) {
                r.fail("$.noise.depolarizing_prob_2q", "must lie in [0, 1]");
            }
            r.read_uint(n, "trajectories", "$.noise", model.trajectories, 1);
            config.solve.noise = model;
        } else {
            r.fail("$.noise", "expected null, \"none\", \"table-s1\" or an object");
        }
    }

    if (doc.contains("optimizer")) {
        const auto &o = doc.at("optimizer");
        if (!o.is_object()) {
            r.fail("$.optimizer", "expected an object");
        } else {
            r.check_keys(o, "$.optimizer",
                         {"kernel_variance", "lengthscale", "noise_variance", "prior_mean", "kappa", "candidate_count",
                          "refinement_steps", "periodic"});
            auto &opt = config.solve.optimizer;
            r.read_double(o, "kernel_variance", "$.optimizer", opt.kernel.variance, true);
            r.read_double(o, "lengthscale", "$.optimizer", opt.kernel.lengthscale, true);
            r.read_double(o, "noise_variance", "$.optimizer", opt.noise_variance, false, true);
            if (o.contains("prior_mean")) {
                if (o.at("prior_mean").is_number()) {
                    opt.prior_mean = o.at("prior_mean").get<double>();
                } else {
                    r.fail("$.optimizer.prior_mean", "expected a number");
                }
            }
            r.read_double(o, "kappa", "$.optimizer", opt.acquisition.kappa, false, true);
            r.read_uint(o, "candidate_count", "$.optimizer", opt.acquisition.candidate_count, 1);
            r.read_uint(o, "refinement_steps", "$.optimizer", opt.acquisition.refinement_steps);
            r.read_bool(o, "periodic", "$.optimizer", opt.kernel.periodic);
        }
    }

    if (!r.problems.empty()) {
        throw ConfigError(r.problems);
    }
    return config;
}

nlohmann::json experiment_config_to_json(const ExperimentConfig &config) {
    nlohmann::json graph;
    switch (config.graph.kind) {
    case GraphSource::Kind::topology_19q:
        graph = {{"source", "topology19q"}, {"weight_seed", config.graph.weight_seed}};
        break;
    case GraphSource::Kind::file:
        graph = {{"source", "file"}, {"path", config.graph.path.generic_string()}};
        break;
    case GraphSource::Kind::gaussian_clusters:
        graph = {{"source", "gaussian_clusters"},
                 {"weight_seed", config.graph.weight_seed},
                 {"points_per_cluster", config.graph.points_per_cluster},
                 {"separation", config.graph.separation},
                 {"radius", config.graph.radius}};
        break;
    }
    nlohmann::json noise = nullptr;
    if (config.device_noise) {
        noise = "table-s1";
    } else if (config.solve.noise) {
        noise = {{"readout_flip_prob", config.solve.noise->readout_flip_prob},
                 {"depolarizing_prob_2q", config.solve.noise->depolarizing_prob_2q},
                 {"trajectories", config.solve.noise->trajectories}};
    }
    const auto &opt = config.solve.optimizer;
    const char *statistic = config.solve.statistic == Statistic::max    ? "max"
                            : config.solve.statistic == Statistic::mean ? "mean"
                                                                        : "expected_max";
    return {{"name", config.name},
            {"graph", graph},
            {"instances", config.instances},
            {"runs", config.runs},
            {"master_seed", config.master_seed},
            {"p", config.solve.p},
            {"shots", config.solve.shots},
            {"budget", opt.budget},
            {"statistic", statistic},
            {"early_stop", config.solve.early_stop},
            {"rescale_gamma", config.solve.rescale_gamma},
            {"noise", noise},
            {"optimizer",
             {{"kernel_variance", opt.kernel.variance},
              {"lengthscale", opt.kernel.lengthscale},
              {"noise_variance", opt.noise_variance},
              {"prior_mean", opt.prior_mean},
              {"kappa", opt.acquisition.kappa},
              {"candidate_count", opt.acquisition.candidate_count},
              {"refinement_steps", opt.acquisition.refinement_steps},
              {"periodic", opt.kernel.periodic}}},
            {"export_step_costs", config.export_step_costs}};
}

std::vector<ProblemInstance> build_instances(const ExperimentConfig &config) {
    std::vector<ProblemInstance> instances;
    for (std::size_t i = 0; i < config.instances; ++i) {
        const std::uint64_t seed =
            config.instances == 1 ? config.graph.weight_seed : derive_seed(config.graph.weight_seed, i);
        ProblemInstance inst;
        switch (config.graph.kind) {
        case GraphSource::Kind::topology_19q:
            inst.graph = random_weights(topology_19q(), seed);
            break;
        case GraphSource::Kind::file:
            inst.graph = read_graph_file(config.graph.path);
            break;
        case GraphSource::Kind::gaussian_clusters: {
            const LabelledPoints data = gaussian_clusters(config.graph.points_per_cluster, config.graph.separation,
                                                          config.graph.radius, seed);
            inst.graph = euclidean_distance_matrix(data.points);
            inst.truth = data.truth;
            break;
        }
        }
        inst.optimum = brute_force_maxcut(inst.graph);
        inst.optimal_count = count_optimal_assignments(inst.graph, inst.optimum.value);
        if (inst.truth) {
            LabelAssignment best;
            for (std::size_t k = 0; k < inst.graph.node_count(); ++k) {
                best.labels.push_back(inst.optimum.assignment.bit(k) ? 1 : 0);
            }
            inst.truth_is_optimal = best.same_partition(*inst.truth);
        }
        instances.push_back(std::move(inst));
    }
    return instances;
}

ExperimentResult run_experiment(const ExperimentConfig &config) {
    ExperimentResult result;
    result.config = config;
    result.instances = build_instances(config);

    std::vector<QaoaSimulator> simulators;
    std::vector<QaoaSolveConfig> solve_configs;
    for (const auto &inst : result.instances) {
        simulators.emplace_back(inst.graph);
        QaoaSolveConfig solve = config.solve;
        solve.keep_step_costs = config.export_step_costs;
        if (config.device_noise) {
            std::vector<int> labels;
            if (config.graph.kind == GraphSource::Kind::topology_19q) {
                labels = topology_19q_qubit_labels();
            } else {
                labels.resize(inst.graph.node_count());
                std::iota(labels.begin(), labels.end(), 0);
            }
            solve.noise = NoiseModel::device_table(labels);
        }
        solve_configs.push_back(std::move(solve));
    }

    result.runs.resize(config.runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < config.runs; r = next++) {
            try {
                const std::size_t i = r % result.instances.size();
                RunTrace trace;
                trace.run = r;
                trace.instance = i;
                trace.result = solve_maxcut_qaoa(simulators[i], solve_configs[i], derive_seed(config.master_seed, r),
                                                 result.instances[i].optimum.value);
                if (const auto &truth = result.instances[i].truth) {
                    LabelAssignment found;
                    for (std::size_t k = 0; k < trace.result.best_bitstring.size(); ++k) {
                        found.labels.push_back(trace.result.best_bitstring.bit(k) ? 1 : 0);
                    }
                    trace.labels_recovered = found.same_partition(*truth);
                }
                result.runs[r] = std::move(trace);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(config.workers == 0 ? hw : config.workers, std::max<std::size_t>(1, config.runs));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return result;
}

ExperimentAnalysis analyze_times(std::vector<double> time_to_optimum, std::size_t budget, std::size_t shots,
                                 double p_success, std::uint64_t seed) {
    ExperimentAnalysis a;
    a.budget = budget;
    a.shots = shots;
    a.p_success = p_success;
    a.null_cdf = tabulate_random_sampling(p_success, shots, budget);
    a.successes = static_cast<std::size_t>(
        std::count_if(time_to_optimum.begin(), time_to_optimum.end(), [](double t) { return std::isfinite(t); }));
    const std::size_t n = time_to_optimum.size();
    a.time_to_optimum = std::move(time_to_optimum);
    if (n == 0) {
        a.ecdf.assign(budget + 1, 0.0);
        a.empirical_random_cdf.assign(budget + 1, 0.0);
        return a;
    }
    a.ecdf = tabulate(empirical_cdf(a.time_to_optimum), budget);

    // Random bit-string sampling with the same shot budget: each step
    // succeeds independently with probability 1 - (1 - p)^shots.
    Rng rng(derive_seed(seed, 0x72616e64));
    const double per_step = random_sampling_cdf(p_success, shots, 1);
    std::vector<double> random_times;
    for (std::size_t r = 0; r < n; ++r) {
        double t = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= budget; ++k) {
            if (rng.bernoulli(per_step)) {
                t = static_cast<double>(k);
                break;
            }
        }
        random_times.push_back(t);
    }
    a.empirical_random_cdf = tabulate(empirical_cdf(random_times), budget);

    auto compare = [&](std::string name, const std::vector<double> &f) {
        KsComparison c;
        c.name = std::move(name);
        c.ks = ks_statistic(f, a.null_cdf);
        c.n = n;
        c.m = budget;
        c.alpha = ks_significance(c.ks, c.n, c.m);
        a.comparisons.push_back(c);
    };
    compare("algorithm_vs_random_sampling", a.ecdf);
    compare("empirical_random_sampling_vs_random_sampling", a.empirical_random_cdf);
    return a;
}

ExperimentAnalysis analyze(const ExperimentResult &result) {
    std::vector<double> times;
    for (const auto &run : result.runs) {
        const auto &t = run.result.time_to_optimum;
        times.push_back(t ? static_cast<double>(*t) : std::numeric_limits<double>::infinity());
    }
    double p = 0.0;
    for (const auto &inst : result.instances) {
        p += random_success_probability(inst.optimal_count, inst.graph.node_count());
    }
    if (!result.instances.empty()) {
        p /= static_cast<double>(result.instances.size());
    }
    return analyze_times(std::move(times), result.config.budget(), result.config.solve.shots, p,
                         result.config.master_seed);
}

} // namespace qcluster
