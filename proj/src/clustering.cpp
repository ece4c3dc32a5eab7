#include "qcluster/clustering.hpp"

#include "qcluster/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcluster {

double Box::density(double x, double y) const {
    const bool inside = x >= lo(0) && x <= hi(0) && y >= lo(1) && y <= hi(1);
    return inside ? 1.0 / area() : 0.0;
}

void Dataset::validate() const {
    if (size() < 2) {
        throw std::invalid_argument("dataset needs at least two elements");
    }
    if (kind == Kind::points) {
        const std::size_t dim = points.front().size();
        if (dim == 0) {
            throw std::invalid_argument("points need at least one coordinate");
        }
        for (const auto &p : points) {
            if (p.size() != dim) {
                throw std::invalid_argument("all points must have the same dimension");
            }
            for (double x : p) {
                if (!std::isfinite(x)) {
                    throw std::invalid_argument("point coordinates must be finite");
                }
            }
        }
    } else {
        for (const Box &b : boxes) {
            if (!(b.size[0] > 0.0) || !(b.size[1] > 0.0) || !std::isfinite(b.area()) ||
                !std::isfinite(b.center[0]) || !std::isfinite(b.center[1])) {
                throw std::invalid_argument("boxes need finite centres and positive sizes");
            }
        }
    }
}

Dataset Dataset::from_points(std::vector<std::vector<double>> points) {
    Dataset d;
    d.kind = Kind::points;
    d.points = std::move(points);
    d.validate();
    return d;
}

Dataset Dataset::from_boxes(std::vector<Box> boxes) {
    Dataset d;
    d.kind = Kind::boxes;
    d.boxes = std::move(boxes);
    d.validate();
    return d;
}

Dataset dataset_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc.contains("data") || !doc.at("data").is_array()) {
        throw std::invalid_argument("dataset JSON needs \"kind\" and a \"data\" array");
    }
    const std::string kind = doc.at("kind").get<std::string>();
    const auto &data = doc.at("data");
    try {
        if (kind == "points") {
            return Dataset::from_points(data.get<std::vector<std::vector<double>>>());
        }
        if (kind == "boxes") {
            std::vector<Box> boxes;
            for (const auto &item : data) {
                const auto c = item.at("center").get<std::vector<double>>();
                const auto s = item.at("size").get<std::vector<double>>();
                if (c.size() != 2 || s.size() != 2) {
                    throw std::invalid_argument("box center and size must have two entries");
                }
                boxes.push_back({{c[0], c[1]}, {s[0], s[1]}});
            }
            return Dataset::from_boxes(std::move(boxes));
        }
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("dataset JSON: ") + e.what());
    }
    throw std::invalid_argument("dataset kind must be \"points\" or \"boxes\", got \"" + kind + "\"");
}

nlohmann::json dataset_to_json(const Dataset &d) {
    nlohmann::json data = nlohmann::json::array();
    if (d.kind == Dataset::Kind::points) {
        for (const auto &p : d.points) {
            data.push_back(p);
        }
        return {{"kind", "points"}, {"data", data}};
    }
    for (const Box &b : d.boxes) {
        data.push_back({{"center", b.center}, {"size", b.size}});
    }
    return {{"kind", "boxes"}, {"data", data}};
}

WeightedGraph euclidean_distance_matrix(const std::vector<std::vector<double>> &points) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].size() != points[j].size()) {
                throw std::invalid_argument("points differ in dimension");
            }
            double sq = 0.0;
            for (std::size_t k = 0; k < points[i].size(); ++k) {
                const double d = points[i][k] - points[j][k];
                sq += d * d;
            }
            edges.push_back({i, j, std::sqrt(sq)});
        }
    }
    return WeightedGraph(points.size(), std::move(edges));
}

namespace {

template <typename F>
double integrate_rect(double x0, double x1, double y0, double y1, F &&f) {
    const std::size_t n = kOverlapGridResolution;
    const double dx = (x1 - x0) / static_cast<double>(n);
    const double dy = (y1 - y0) / static_cast<double>(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x0 + (static_cast<double>(i) + 0.5) * dx;
        for (std::size_t j = 0; j < n; ++j) {
            total += f(x, y0 + (static_cast<double>(j) + 0.5) * dy);
        }
    }
    return total * dx * dy;
}

} // namespace

double integrate_density(const Box &p) {
    return integrate_rect(p.lo(0), p.hi(0), p.lo(1), p.hi(1), [&](double x, double y) { return p.density(x, y); });
}

double bhattacharyya_coefficient(const Box &p, const Box &q) {
    for (const Box *b : {&p, &q}) {
        if (!(std::abs(integrate_density(*b) - 1.0) <= 1e-6)) {
            throw std::invalid_argument("bhattacharyya_coefficient: density is not normalised");
        }
    }
    const double x0 = std::max(p.lo(0), q.lo(0));
    const double x1 = std::min(p.hi(0), q.hi(0));
    const double y0 = std::max(p.lo(1), q.lo(1));
    const double y1 = std::min(p.hi(1), q.hi(1));
    if (!(x1 > x0) || !(y1 > y0)) {
        return 0.0;
    }
    const double b = integrate_rect(x0, x1, y0, y1,
                                    [&](double x, double y) { return std::sqrt(p.density(x, y) * q.density(x, y)); });
    return std::clamp(b, 0.0, 1.0);
}

WeightedGraph overlap_graph(const std::vector<Box> &boxes) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        for (std::size_t j = i + 1; j < boxes.size(); ++j) {
            const double b = bhattacharyya_coefficient(boxes[i], boxes[j]);
            if (b > 1e-9) {
                edges.push_back({i, j, b});
            }
        }
    }
    return WeightedGraph(boxes.size(), std::move(edges));
}

WeightedGraph clustering_graph(const Dataset &d) {
    d.validate();
    return d.kind == Dataset::Kind::points ? euclidean_distance_matrix(d.points) : overlap_graph(d.boxes);
}

LabelAssignment LabelAssignment::flipped() const {
    LabelAssignment out = *this;
    for (int &l : out.labels) {
        l = 1 - l;
    }
    return out;
}

bool LabelAssignment::same_partition(const LabelAssignment &other) const {
    return labels == other.labels || labels == other.flipped().labels;
}

nlohmann::json labels_to_json(const LabelAssignment &labels) { return {{"labels", labels.labels}}; }

BiclusterResult bicluster(const Dataset &d, MaxcutSolver solver, const QaoaSolveConfig &config, std::uint64_t seed) {
    BiclusterResult result;
    result.graph = clustering_graph(d);
    BitString bits;
    if (solver == MaxcutSolver::brute_force) {
        const MaxcutSolution exact = brute_force_maxcut(result.graph);
        bits = exact.assignment;
        result.cut = exact.value;
    } else {
        const QaoaSimulator sim(result.graph);
        const SolveResult solved = solve_maxcut_qaoa(sim, config, seed);
        if (solved.error) {
            throw std::runtime_error("QAOA solve failed: " + *solved.error);
        }
        bits = solved.best_bitstring;
        result.cut = solved.best_cost;
    }
    result.labels.labels.resize(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) {
        result.labels.labels[k] = bits.bit(k) ? 1 : 0;
    }
    return result;
}

LabelledPoints gaussian_clusters(std::size_t per_cluster, double separation, double radius, std::uint64_t seed) {
    Rng rng(seed);
    LabelledPoints out;
    for (int cluster = 0; cluster < 2; ++cluster) {
        const double cx = cluster == 0 ? 0.0 : separation;
        for (std::size_t k = 0; k < per_cluster; ++k) {
            const double x = cx + radius * rng.normal();
            const double y = radius * rng.normal();
            out.points.push_back({x, y});
            out.truth.labels.push_back(cluster);
        }
    }
    return out;
}

std::vector<Box> boxes_19q() {
    std::vector<Box> boxes;
    for (int label : topology_19q_qubit_labels()) {
        double x = 0.0;
        double y = 0.0;
        if (label < 5) { // tunable, top row
            x = 2.0 * label + 1.0;
            y = 3.0;
        } else if (label < 10) { // fixed
            x = 2.0 * (label - 5);
            y = 2.0;
        } else if (label < 15) { // tunable
            x = 2.0 * (label - 10);
            y = 1.0;
        } else { // fixed, bottom row
            x = 2.0 * (label - 15) - 1.0;
            y = 0.0;
        }
        boxes.push_back({{x, y}, {1.5, 1.5}});
    }
    return boxes;
}

} // namespace qcluster
