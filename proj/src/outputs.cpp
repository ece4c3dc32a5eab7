#include "qcluster/experiment.hpp"
#include "qcluster/graph_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qcluster {

namespace {

std::string num(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string joined(const std::vector<double> &xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) {
            out += ';';
        }
        out += num(xs[i]);
    }
    return out;
}

std::string cdf_csv(const std::vector<double> &cdf) {
    std::string out = "step,cdf\n";
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        out += std::to_string(k) + "," + num(cdf[k]) + "\n";
    }
    return out;
}

nlohmann::json finite_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json ks_report_json(const ExperimentAnalysis &analysis) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &c : analysis.comparisons) {
        rows.push_back({{"name", c.name}, {"ks", c.ks}, {"n", c.n}, {"m", c.m}, {"alpha", c.alpha}});
    }
    return {{"p_success", analysis.p_success},
            {"shots", analysis.shots},
            {"budget", analysis.budget},
            {"comparisons", rows}};
}

void emit_outputs(const ExperimentResult &result, const std::filesystem::path &out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error(out_dir.string() + ": cannot create directory: " + ec.message());
    }
    const ExperimentAnalysis analysis = analyze(result);

    std::string traces = "run,step,gamma,beta,best,mean,historic_best,normalized\n";
    std::map<std::tuple<std::size_t, std::size_t, double>, std::size_t> cost_counts;
    for (const auto &run : result.runs) {
        for (const auto &rec : run.result.records) {
            traces += std::to_string(run.run) + "," + std::to_string(rec.step) + "," + joined(rec.gammas) + "," +
                      joined(rec.betas) + "," + num(rec.best_cost) + "," + num(rec.mean_cost) + "," +
                      num(rec.historic_best) + "," + num(rec.normalized_historic_best) + "\n";
        }
        for (std::size_t s = 0; s < run.result.step_costs.size(); ++s) {
            for (double c : run.result.step_costs[s]) {
                ++cost_counts[{run.run, s + 1, c}];
            }
        }
    }
    std::string costs = "run,step,cost,count\n";
    for (const auto &[key, count] : cost_counts) {
        costs += std::to_string(std::get<0>(key)) + "," + std::to_string(std::get<1>(key)) + "," +
                 num(std::get<2>(key)) + "," + std::to_string(count) + "\n";
    }

    nlohmann::json runs = nlohmann::json::array();
    std::size_t recovered = 0;
    std::size_t with_truth = 0;
    for (const auto &run : result.runs) {
        nlohmann::json row = {{"run", run.run},
                              {"instance", run.instance},
                              {"steps", run.result.records.size()},
                              {"best_cost", run.result.best_cost},
                              {"best_bitstring", run.result.best_bitstring.to_string()},
                              {"time_to_optimum", run.result.time_to_optimum
                                                      ? nlohmann::json(*run.result.time_to_optimum)
                                                      : nlohmann::json(nullptr)}};
        if (run.labels_recovered) {
            row["labels_recovered"] = *run.labels_recovered;
            ++with_truth;
            recovered += *run.labels_recovered ? 1 : 0;
        }
        if (run.result.error) {
            row["error"] = *run.result.error;
        }
        runs.push_back(row);
    }
    nlohmann::json instances = nlohmann::json::array();
    for (const auto &inst : result.instances) {
        instances.push_back({{"nodes", inst.graph.node_count()},
                             {"edges", inst.graph.edge_count()},
                             {"optimum", inst.optimum.value},
                             {"optimum_bitstring", inst.optimum.assignment.to_string()},
                             {"optimal_count", inst.optimal_count},
                             {"truth_is_optimal", inst.truth_is_optimal ? nlohmann::json(*inst.truth_is_optimal)
                                                             : nlohmann::json(nullptr)}});
    }
    nlohmann::json summary = {{"config", experiment_config_to_json(result.config)},
                              {"runs", result.runs.size()},
                              {"successes", analysis.successes},
                              {"success_rate", result.runs.empty() ? 0.0
                                                                   : static_cast<double>(analysis.successes) /
                                                                         static_cast<double>(result.runs.size())},
                              {"instances", instances},
                              {"per_run", runs}};
    if (with_truth > 0) {
        summary["labels_recovered"] = recovered;
    }
    std::vector<double> times;
    for (double t : analysis.time_to_optimum) {
        if (std::isfinite(t)) {
            times.push_back(t);
        }
    }
    summary["median_time_to_optimum"] =
        times.empty() ? nlohmann::json(nullptr) : finite_or_null(times[times.size() / 2]);

    write_text_file(out_dir / "traces.csv", traces);
    write_text_file(out_dir / "ecdf.csv", cdf_csv(analysis.ecdf));
    write_text_file(out_dir / "null_cdf.csv", cdf_csv(analysis.null_cdf));
    write_text_file(out_dir / "ks_report.json", ks_report_json(analysis).dump(2) + "\n");
    write_text_file(out_dir / "per_step_costs.csv", costs);
    write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

std::vector<double> times_from_traces_csv(const std::string &csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("run,step", 0) != 0) {
        throw std::invalid_argument("traces.csv: missing header");
    }
    std::map<long long, double> times;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) {
            fields.push_back(f);
        }
        if (fields.size() != 8) {
            throw std::invalid_argument("traces.csv line " + std::to_string(line_no) + ": expected 8 fields");
        }
        long long run = 0;
        double step = 0;
        double normalized = 0;
        try {
            run = std::stoll(fields[0]);
            step = std::stod(fields[1]);
            normalized = std::stod(fields[7]);
        } catch (const std::exception &) {
            throw std::invalid_argument("traces.csv line " + std::to_string(line_no) + ": malformed number");
        }
        auto [it, inserted] = times.try_emplace(run, std::numeric_limits<double>::infinity());
        if (normalized >= 1.0 - 1e-9 && step < it->second) {
            it->second = step;
        }
    }
    std::vector<double> out;
    for (const auto &[run, t] : times) {
        out.push_back(t);
    }
    return out;
}

} // namespace qcluster
