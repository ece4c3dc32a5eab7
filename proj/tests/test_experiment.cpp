#include "qcluster/errors.hpp"
#include "qcluster/experiment.hpp"
#include "qcluster/graph_io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

using namespace qcluster;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
    const fs::path dir = fs::temp_directory_path() / ("qcluster_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig small_config(const fs::path &dir) {
    const fs::path graph = dir / "g.json";
    write_graph_file(random_graph(8, 0.5, 3), graph);
    ExperimentConfig c = parse_experiment_config(nlohmann::json::parse(R"({"graph": {"source": "file", "path": "g.json"},
        "runs": 2, "budget": 3, "shots": 4, "early_stop": false})"),
                                                 dir);
    return c;
}

std::size_t line_count(const std::string &text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::vector<std::string> config_problems(const std::string &text) {
    try {
        parse_experiment_config(nlohmann::json::parse(text));
    } catch (const ConfigError &e) {
        return e.problems();
    }
    return {};
}

} // namespace

TEST(Presets, MatchDocumentedDefaults) {
    const ExperimentConfig d = experiment_preset("default");
    EXPECT_EQ(d.solve.p, 1U);
    EXPECT_EQ(d.solve.shots, 2500U);
    EXPECT_EQ(d.budget(), 55U);
    EXPECT_EQ(d.graph.kind, GraphSource::Kind::topology_19q);
    EXPECT_EQ(experiment_preset("randomized-instances").instances, 5U);
    const ExperimentConfig f = experiment_preset("fc20");
    EXPECT_EQ(f.solve.shots, 250U);
    EXPECT_EQ(f.graph.kind, GraphSource::Kind::gaussian_clusters);
    EXPECT_THROW(experiment_preset("nope"), ConfigError);
}

TEST(ConfigParser, ReportsEveryProblemWithPath) {
    const auto problems = config_problems(
        R"({"runs": -1, "shots": 0, "statistic": "median", "graph": {"source": "moon"}, "optimizer": {"lengthscale": 0}, "typo": 1})");
    ASSERT_EQ(problems.size(), 6U);
    auto has = [&](const std::string &prefix) {
        return std::any_of(problems.begin(), problems.end(), [&](const auto &p) { return p.rfind(prefix, 0) == 0; });
    };
    EXPECT_TRUE(has("$.runs"));
    EXPECT_TRUE(has("$.shots"));
    EXPECT_TRUE(has("$.statistic"));
    EXPECT_TRUE(has("$.graph.source"));
    EXPECT_TRUE(has("$.optimizer.lengthscale"));
    EXPECT_TRUE(has("$.typo"));
}

TEST(ConfigParser, NoiseForms) {
    EXPECT_TRUE(parse_experiment_config(nlohmann::json::parse(R"({"noise": "table-s1"})")).device_noise);
    const ExperimentConfig c =
        parse_experiment_config(nlohmann::json::parse(R"({"noise": {"readout_flip_prob": 0.05, "depolarizing_prob_2q": 0.01}})"));
    ASSERT_TRUE(c.solve.noise.has_value());
    EXPECT_EQ(c.solve.noise->readout_flip_prob, std::vector<double>{0.05});
    EXPECT_FALSE(config_problems(R"({"noise": {"readout_flip_prob": 0.7}})").empty());
    EXPECT_FALSE(config_problems(R"({"noise": "loud"})").empty());
    EXPECT_FALSE(config_problems(R"({"graph": {"source": "file"}})").empty());
}

TEST(ConfigParser, RoundTripsThroughJson) {
    const ExperimentConfig c = parse_experiment_config(nlohmann::json::parse(
        R"({"preset": "fc20", "runs": 3, "p": 2, "statistic": "expected_max", "optimizer": {"kappa": 1.5, "periodic": true}})"));
    const ExperimentConfig back = parse_experiment_config(experiment_config_to_json(c));
    EXPECT_EQ(experiment_config_to_json(back), experiment_config_to_json(c));
    EXPECT_EQ(back.solve.p, 2U);
    EXPECT_EQ(back.solve.statistic, Statistic::expected_max);
    EXPECT_TRUE(back.solve.optimizer.kernel.periodic);
}

TEST(RunExperiment, ShapeContract) {
    const fs::path dir = scratch_dir("shape");
    ExperimentConfig c = small_config(dir);
    c.solve.early_stop = true;
    const ExperimentResult r = run_experiment(c);
    ASSERT_EQ(r.runs.size(), 2U);
    for (const auto &run : r.runs) {
        EXPECT_LE(run.result.records.size(), 3U);
        EXPECT_GE(run.result.records.size(), 1U);
        for (std::size_t i = 1; i < run.result.records.size(); ++i) {
            EXPECT_GE(run.result.records[i].historic_best, run.result.records[i - 1].historic_best);
        }
        for (const auto &rec : run.result.records) {
            EXPECT_LE(rec.normalized_historic_best, 1.0 + 1e-12);
        }
    }
}

TEST(RunExperiment, IndependentOfWorkerCount) {
    const fs::path dir = scratch_dir("workers");
    ExperimentConfig c = small_config(dir);
    c.runs = 5;
    c.workers = 1;
    const ExperimentResult a = run_experiment(c);
    c.workers = 3;
    const ExperimentResult b = run_experiment(c);
    emit_outputs(a, dir / "a");
    emit_outputs(b, dir / "b");
    EXPECT_EQ(read_text_file(dir / "a" / "traces.csv"), read_text_file(dir / "b" / "traces.csv"));
}

TEST(EmitOutputs, SixTraceRowsAndAllFiles) {
    const fs::path dir = scratch_dir("emit");
    const ExperimentResult r = run_experiment(small_config(dir));
    emit_outputs(r, dir / "out");
    for (const char *name : {"traces.csv", "ecdf.csv", "null_cdf.csv", "ks_report.json", "per_step_costs.csv", "summary.json"}) {
        EXPECT_TRUE(fs::exists(dir / "out" / name)) << name;
    }
    const std::string traces = read_text_file(dir / "out" / "traces.csv");
    EXPECT_EQ(traces.substr(0, traces.find('\n')), "run,step,gamma,beta,best,mean,historic_best,normalized");
    EXPECT_EQ(line_count(traces), 1U + 6U);
    const auto summary = nlohmann::json::parse(read_text_file(dir / "out" / "summary.json"));
    EXPECT_EQ(summary["runs"], 2);
    const auto ks = nlohmann::json::parse(read_text_file(dir / "out" / "ks_report.json"));
    ASSERT_EQ(ks["comparisons"].size(), 2U);
    for (const auto &row : ks["comparisons"]) {
        EXPECT_TRUE(row.contains("ks") && row.contains("n") && row.contains("m") && row.contains("alpha"));
    }
    const std::string costs = read_text_file(dir / "out" / "per_step_costs.csv");
    EXPECT_EQ(costs.substr(0, costs.find('\n')), "run,step,cost,count");
}

TEST(EmitOutputs, ByteIdenticalOnRerun) {
    const fs::path dir = scratch_dir("rerun");
    const ExperimentConfig c = small_config(dir);
    emit_outputs(run_experiment(c), dir / "a");
    emit_outputs(run_experiment(c), dir / "b");
    for (const char *name : {"traces.csv", "ecdf.csv", "null_cdf.csv", "ks_report.json", "per_step_costs.csv", "summary.json"}) {
        EXPECT_EQ(read_text_file(dir / "a" / name), read_text_file(dir / "b" / name)) << name;
    }
}

TEST(EmitOutputs, EmptyRunListGivesHeadersOnly) {
    const fs::path dir = scratch_dir("empty");
    ExperimentConfig c = small_config(dir);
    c.runs = 0;
    emit_outputs(run_experiment(c), dir / "out");
    EXPECT_EQ(line_count(read_text_file(dir / "out" / "traces.csv")), 1U);
    EXPECT_EQ(line_count(read_text_file(dir / "out" / "per_step_costs.csv")), 1U);
    EXPECT_EQ(nlohmann::json::parse(read_text_file(dir / "out" / "summary.json"))["runs"], 0);
}

TEST(EmitOutputs, UnwritableDirectoryNamesPath) {
    const fs::path dir = scratch_dir("unwritable");
    write_text_file(dir / "file", "x");
    ExperimentConfig c = small_config(dir);
    c.runs = 0;
    try {
        emit_outputs(run_experiment(c), dir / "file" / "sub");
        FAIL() << "expected an exception";
    } catch (const std::runtime_error &e) {
        EXPECT_NE(std::string(e.what()).find("file"), std::string::npos);
    }
}

TEST(TracesCsv, TimesRecovered) {
    const fs::path dir = scratch_dir("times");
    ExperimentConfig c = small_config(dir);
    c.runs = 4;
    c.solve.optimizer.budget = 10;
    c.solve.shots = 20;
    const ExperimentResult r = run_experiment(c);
    emit_outputs(r, dir / "out");
    const auto times = times_from_traces_csv(read_text_file(dir / "out" / "traces.csv"));
    ASSERT_EQ(times.size(), 4U);
    for (std::size_t i = 0; i < 4; ++i) {
        const auto &t = r.runs[i].result.time_to_optimum;
        if (t) {
            EXPECT_EQ(times[i], static_cast<double>(*t));
        } else {
            EXPECT_TRUE(std::isinf(times[i]));
        }
    }
    EXPECT_THROW(times_from_traces_csv("nonsense\n"), std::invalid_argument);
    EXPECT_THROW(times_from_traces_csv("run,step,gamma,beta,best,mean,historic_best,normalized\n1,2,3\n"),
                 std::invalid_argument);
}

TEST(AnalyzeTimes, ComparisonsUseRunsAndBudget) {
    std::vector<double> times = {1, 2, 3, std::numeric_limits<double>::infinity()};
    const ExperimentAnalysis a = analyze_times(times, 10, 100, 0.001, 1);
    EXPECT_EQ(a.successes, 3U);
    ASSERT_EQ(a.ecdf.size(), 11U);
    EXPECT_EQ(a.ecdf[10], 0.75);
    ASSERT_EQ(a.comparisons.size(), 2U);
    EXPECT_EQ(a.comparisons[0].n, 4U);
    EXPECT_EQ(a.comparisons[0].m, 10U);
    EXPECT_NEAR(a.comparisons[0].alpha, ks_significance(a.comparisons[0].ks, 4, 10), 1e-15);
}

TEST(BuildInstances, RandomizedPresetUsesDistinctWeights) {
    ExperimentConfig c = experiment_preset("randomized-instances");
    c.instances = 2;
    const auto inst = build_instances(c);
    ASSERT_EQ(inst.size(), 2U);
    EXPECT_NE(inst[0].graph.edges(), inst[1].graph.edges());
    for (const auto &i : inst) {
        EXPECT_EQ(i.optimal_count, 2U);
    }
}

TEST(BuildInstances, GaussianTruthIsOptimal) {
    const auto inst = build_instances(experiment_preset("fc20"));
    ASSERT_EQ(inst.size(), 1U);
    ASSERT_TRUE(inst[0].truth_is_optimal.has_value());
    EXPECT_TRUE(*inst[0].truth_is_optimal);
    EXPECT_EQ(inst[0].graph.edge_count(), 190U);
}
