// qaoa-cluster: command-line front end for the QAOA Maxcut clustering library.
#include "qcluster/circuit.hpp"
#include "qcluster/clustering.hpp"
#include "qcluster/errors.hpp"
#include "qcluster/experiment.hpp"
#include "qcluster/graph_io.hpp"
#include "qcluster/solver.hpp"

#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

using namespace qcluster;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Input problems (bad flags, malformed graph/program/config files).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

NoiseModel noise_for(const std::string &name, std::size_t n_qubits) {
    if (name != "table-s1") {
        throw InputError("--noise: expected \"table-s1\" or \"none\"");
    }
    if (n_qubits == topology_19q_qubit_labels().size()) {
        return NoiseModel::device_table(topology_19q_qubit_labels());
    }
    if (n_qubits > 20) {
        throw InputError("--noise table-s1 covers at most 20 qubits");
    }
    std::vector<int> labels(n_qubits);
    std::iota(labels.begin(), labels.end(), 0);
    return NoiseModel::device_table(labels);
}

std::string read_input(const std::string &path) {
    try {
        return read_text_file(path);
    } catch (const std::runtime_error &e) {
        throw InputError(e.what());
    }
}

WeightedGraph load_graph(const std::string &path) {
    const std::string text = read_input(path);
    try {
        return graph_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception &e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::invalid_argument &e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_or_print(const std::string &out, const std::string &text) {
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

struct SolveFlags {
    std::size_t p = 1;
    std::size_t shots = 2500;
    std::size_t budget = 55;
    std::uint64_t seed = 7;
    std::string noise = "none";
};

void add_solve_flags(CLI::App *cmd, SolveFlags &f) {
    cmd->add_option("--p", f.p, "QAOA depth")->check(CLI::PositiveNumber);
    cmd->add_option("--shots", f.shots, "Shots per optimizer step")->check(CLI::PositiveNumber);
    cmd->add_option("--budget", f.budget, "Optimizer steps")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "Master seed");
    cmd->add_option("--noise", f.noise, "none | table-s1");
}

QaoaSolveConfig solve_config(const SolveFlags &f, std::size_t n_qubits) {
    QaoaSolveConfig config;
    config.p = f.p;
    config.shots = f.shots;
    config.optimizer.budget = f.budget;
    if (f.noise != "none") {
        config.noise = noise_for(f.noise, n_qubits);
    }
    return config;
}

int cmd_run(const std::string &config_path, const std::string &out_dir, std::size_t workers) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_input(config_path));
    } catch (const nlohmann::json::exception &e) {
        throw InputError(config_path + ": " + e.what());
    }
    ExperimentConfig config = parse_experiment_config(doc, std::filesystem::path(config_path).parent_path());
    if (workers > 0) {
        config.workers = workers;
    }
    const ExperimentResult result = run_experiment(config);
    emit_outputs(result, out_dir);
    const ExperimentAnalysis a = analyze(result);
    std::cout << config.name << ": " << a.successes << "/" << result.runs.size() << " runs reached the optimum within "
              << a.budget << " steps\n";
    for (const auto &c : a.comparisons) {
        std::cout << "  " << c.name << ": ks=" << c.ks << " alpha=" << c.alpha << "\n";
    }
    std::cout << "outputs written to " << out_dir << "\n";
    return 0;
}

int cmd_analyze(const std::string &traces, std::size_t qubits, std::size_t shots, std::size_t budget,
                std::size_t optimal_count, std::uint64_t seed, const std::string &out) {
    std::vector<double> times;
    try {
        times = times_from_traces_csv(read_input(traces));
    } catch (const std::invalid_argument &e) {
        throw InputError(traces + ": " + e.what());
    }
    const double p = random_success_probability(optimal_count, qubits);
    const ExperimentAnalysis a = analyze_times(times, budget, shots, p, seed);
    nlohmann::json report = ks_report_json(a);
    report["runs"] = times.size();
    report["successes"] = a.successes;
    write_or_print(out, report.dump(2) + "\n");
    return 0;
}

int cmd_solve(const std::string &graph_path, const SolveFlags &flags, const std::string &out) {
    const WeightedGraph g = load_graph(graph_path);
    const QaoaSimulator sim(g);
    const QaoaSolveConfig config = solve_config(flags, g.node_count());
    std::optional<double> optimum;
    if (g.node_count() <= kMaxBruteForceNodes) {
        optimum = brute_force_maxcut(g).value;
    }
    const SolveResult r = solve_maxcut_qaoa(sim, config, flags.seed, optimum);
    nlohmann::json doc = {{"best_bitstring", r.best_bitstring.to_string()},
                          {"best_cost", r.best_cost},
                          {"steps", r.records.size()},
                          {"optimum", optimum ? nlohmann::json(*optimum) : nlohmann::json(nullptr)},
                          {"time_to_optimum",
                           r.time_to_optimum ? nlohmann::json(*r.time_to_optimum) : nlohmann::json(nullptr)}};
    if (!r.records.empty()) {
        doc["final_gammas"] = r.records.back().gammas;
        doc["final_betas"] = r.records.back().betas;
    }
    if (r.error) {
        doc["error"] = *r.error;
    }
    write_or_print(out, doc.dump(2) + "\n");
    return r.error ? kExitRuntime : 0;
}

int cmd_cluster(const std::string &data_path, const std::string &solver_name, const SolveFlags &flags,
                const std::string &out) {
    Dataset data;
    try {
        data = dataset_from_json(nlohmann::json::parse(read_input(data_path)));
    } catch (const nlohmann::json::exception &e) {
        throw InputError(data_path + ": " + e.what());
    } catch (const std::invalid_argument &e) {
        throw InputError(data_path + ": " + e.what());
    }
    MaxcutSolver solver;
    if (solver_name == "qaoa") {
        solver = MaxcutSolver::qaoa;
    } else if (solver_name == "brute-force" || solver_name == "brute_force") {
        solver = MaxcutSolver::brute_force;
    } else {
        throw InputError("--solver: expected \"qaoa\" or \"brute-force\"");
    }
    const BiclusterResult r = bicluster(data, solver, solve_config(flags, data.size()), flags.seed);
    nlohmann::json doc = labels_to_json(r.labels);
    doc["cut"] = r.cut;
    write_or_print(out, doc.dump(2) + "\n");
    return 0;
}

int cmd_compile(const std::string &graph_path, std::vector<double> gammas, std::vector<double> betas, std::size_t p,
                const std::string &basis_name, bool fuse, const std::string &out) {
    const WeightedGraph g = load_graph(graph_path);
    TwoQubitBasis basis;
    if (basis_name == "cz") {
        basis = TwoQubitBasis::cz;
    } else if (basis_name == "cnot") {
        basis = TwoQubitBasis::cnot;
    } else {
        throw InputError("--basis: expected \"cz\" or \"cnot\"");
    }
    auto expand = [p](std::vector<double> &v, const char *flag) {
        if (v.size() == 1) {
            v.assign(p, v.front());
        }
        if (v.size() != p) {
            throw InputError(std::string(flag) + ": give one value or exactly --p values");
        }
    };
    expand(gammas, "--gamma");
    expand(betas, "--beta");
    GateProgram program = compile_qaoa(g, QaoaAngles(gammas, betas), basis);
    if (fuse) {
        program = fuse_single_qubit_gates(program);
    }
    write_or_print(out, emit_program(program));
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"QAOA Maxcut clustering: simulate, optimise, compile and analyse"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "results", out;
    std::size_t workers = 0;
    auto *run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("--config", config_path, "Experiment config JSON")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--workers", workers, "Worker threads (0 = config value)");

    std::string traces;
    std::size_t qubits = 19, a_shots = 2500, a_budget = 55, optimal_count = 2;
    std::uint64_t a_seed = 7;
    auto *ana = app.add_subcommand("analyze", "KS comparison of a traces.csv against random sampling");
    ana->add_option("--traces", traces, "traces.csv from a run")->required();
    ana->add_option("--qubits", qubits, "Problem size")->check(CLI::PositiveNumber);
    ana->add_option("--shots", a_shots, "Shots per step")->check(CLI::PositiveNumber);
    ana->add_option("--budget", a_budget, "Optimizer steps")->check(CLI::PositiveNumber);
    ana->add_option("--optimal-count", optimal_count, "Number of optimal bit strings")->check(CLI::PositiveNumber);
    ana->add_option("--seed", a_seed, "Seed of the simulated random-sampling curve");
    ana->add_option("--out", out, "Report file (default stdout)");

    std::string graph_path;
    SolveFlags flags;
    auto *solve = app.add_subcommand("solve", "Solve Maxcut on a graph with Bayesian-optimised QAOA");
    solve->add_option("--graph", graph_path, "Graph JSON")->required();
    add_solve_flags(solve, flags);
    solve->add_option("--out", out, "Result file (default stdout)");

    std::string data_path, solver_name = "qaoa";
    auto *cluster = app.add_subcommand("cluster", "Bi-cluster a point or box dataset");
    cluster->add_option("--data", data_path, "Dataset JSON")->required();
    cluster->add_option("--solver", solver_name, "qaoa | brute-force");
    add_solve_flags(cluster, flags);
    cluster->add_option("--out", out, "Labels file (default stdout)");

    std::vector<double> gammas{0.0}, betas{0.0};
    std::string basis_name = "cz";
    bool fuse = false;
    auto *compile = app.add_subcommand("compile", "Compile a QAOA circuit to the gate program format");
    compile->add_option("--graph", graph_path, "Graph JSON")->required();
    compile->add_option("--gamma", gammas, "Cost angle(s)")->required();
    compile->add_option("--beta", betas, "Driver angle(s)")->required();
    compile->add_option("--p", flags.p, "QAOA depth")->check(CLI::PositiveNumber);
    compile->add_option("--basis", basis_name, "cz | cnot");
    compile->add_flag("--fuse", fuse, "Cancel and merge adjacent single-qubit gates");
    compile->add_option("--out", out, "Program file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            return cmd_run(config_path, out_dir, workers);
        }
        if (*ana) {
            return cmd_analyze(traces, qubits, a_shots, a_budget, optimal_count, a_seed, out);
        }
        if (*solve) {
            return cmd_solve(graph_path, flags, out);
        }
        if (*cluster) {
            return cmd_cluster(data_path, solver_name, flags, out);
        }
        if (*compile) {
            return cmd_compile(graph_path, gammas, betas, flags.p, basis_name, fuse, out);
        }
    } catch (const ConfigError &e) {
        for (const auto &problem : e.problems()) {
            std::cerr << "config error: " << problem << "\n";
        }
        return kExitConfig;
    } catch (const InputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
