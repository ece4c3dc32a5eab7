#include "qcluster/graph.hpp"

#include "qcluster/errors.hpp"
#include "qcluster/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

namespace qcluster {

BitString::BitString(std::size_t size, std::uint64_t bits) : size_(size), bits_(bits) {
    if (size > 64) {
        throw std::invalid_argument("BitString supports at most 64 bits");
    }
    if (size < 64 && (bits >> size) != 0) {
        throw std::invalid_argument("BitString value has bits above its size");
    }
}

BitString BitString::from_string(const std::string &text) {
    std::uint64_t bits = 0;
    const std::size_t n = text.size();
    if (n > 64) {
        throw std::invalid_argument("BitString supports at most 64 bits");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may contain only '0' and '1': " + text);
        }
        if (c == '1') {
            bits |= std::uint64_t{1} << (n - 1 - i);
        }
    }
    return BitString(n, bits);
}

BitString BitString::complement() const {
    const std::uint64_t mask = size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size_) - 1;
    return BitString(size_, ~bits_ & mask);
}

std::string BitString::to_string() const {
    std::string out(size_, '0');
    for (std::size_t k = 0; k < size_; ++k) {
        if (bit(k)) {
            out[size_ - 1 - k] = '1';
        }
    }
    return out;
}

WeightedGraph::WeightedGraph(std::size_t node_count, std::vector<Edge> edges) : node_count_(node_count) {
    if (node_count == 0) {
        throw std::invalid_argument("graph needs at least one node");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    edges_.reserve(edges.size());
    for (Edge e : edges) {
        if (e.u >= node_count || e.v >= node_count) {
            throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                        ") out of range for " + std::to_string(node_count) + " nodes");
        }
        if (e.u == e.v) {
            throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
        }
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw std::invalid_argument("edge weights must be finite and non-negative");
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        if (!seen.emplace(e.u, e.v).second) {
            throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        }
        if (e.weight > 0.0) {
            edges_.push_back(e);
        }
    }
}

double WeightedGraph::total_weight() const {
    double total = 0.0;
    for (const Edge &e : edges_) {
        total += e.weight;
    }
    return total;
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
    if (i > j) {
        std::swap(i, j);
    }
    for (const Edge &e : edges_) {
        if (e.u == i && e.v == j) {
            return e.weight;
        }
    }
    return 0.0;
}

std::vector<std::size_t> WeightedGraph::degrees() const {
    std::vector<std::size_t> deg(node_count_, 0);
    for (const Edge &e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::size_t WeightedGraph::max_degree() const {
    const auto deg = degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<double> WeightedGraph::dense_matrix() const {
    std::vector<double> m(node_count_ * node_count_, 0.0);
    for (const Edge &e : edges_) {
        m[e.u * node_count_ + e.v] = e.weight;
        m[e.v * node_count_ + e.u] = e.weight;
    }
    return m;
}

WeightedGraph WeightedGraph::with_weights(const std::vector<double> &weights) const {
    if (weights.size() != edges_.size()) {
        throw std::invalid_argument("with_weights: expected one weight per edge");
    }
    std::vector<Edge> edges = edges_;
    for (std::size_t k = 0; k < edges.size(); ++k) {
        edges[k].weight = weights[k];
    }
    return WeightedGraph(node_count_, std::move(edges));
}

namespace {

void require_matching(const WeightedGraph &g, const BitString &assignment) {
    if (assignment.size() != g.node_count()) {
        throw std::invalid_argument("assignment has " + std::to_string(assignment.size()) + " bits, graph has " +
                                    std::to_string(g.node_count()) + " nodes");
    }
}

// Same summation order as cut_table so the two agree bit-for-bit.
double cut_of_word(const std::vector<Edge> &edges, std::uint64_t x) {
    double sum = 0.0;
    for (const Edge &e : edges) {
        if (((x >> e.u) ^ (x >> e.v)) & 1U) {
            sum += e.weight;
        }
    }
    return sum;
}

} // namespace

double cut_cost(const WeightedGraph &g, const BitString &assignment) {
    require_matching(g, assignment);
    return cut_of_word(g.edges(), assignment.bits());
}

double ising_energy(const WeightedGraph &g, const BitString &assignment) {
    return -cut_cost(g, assignment);
}

std::vector<double> cut_table(const WeightedGraph &g) {
    const std::size_t n = g.node_count();
    if (n > 30) {
        throw CapacityError("cut_table: too many nodes");
    }
    const std::size_t dim = std::size_t{1} << n;
    std::vector<double> table(dim, 0.0);
    for (const Edge &e : g.edges()) {
        const std::size_t mu = std::size_t{1} << e.u;
        const std::size_t mv = std::size_t{1} << e.v;
        for (std::size_t x = 0; x < dim; ++x) {
            if (((x & mu) != 0) != ((x & mv) != 0)) {
                table[x] += e.weight;
            }
        }
    }
    return table;
}

MaxcutSolution brute_force_maxcut(const WeightedGraph &g) {
    const std::size_t n = g.node_count();
    if (n > kMaxBruteForceNodes) {
        throw CapacityError("brute_force_maxcut: " + std::to_string(n) + " nodes exceeds the limit of " +
                            std::to_string(kMaxBruteForceNodes));
    }
    // x and its complement cut the same edges and exactly one of them has the
    // top bit clear, so the smallest maximiser lives in the lower half.
    const std::uint64_t half = std::uint64_t{1} << (n - 1);
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    const std::uint64_t chunks = std::min<std::uint64_t>(workers, half);

    struct Best {
        std::uint64_t x = 0;
        double value = -1.0;
    };
    std::vector<Best> partial(chunks);
    auto scan = [&](std::uint64_t c) {
        const std::uint64_t lo = half * c / chunks;
        const std::uint64_t hi = half * (c + 1) / chunks;
        Best best{lo, -1.0};
        for (std::uint64_t x = lo; x < hi; ++x) {
            const double v = cut_of_word(g.edges(), x);
            if (v > best.value) {
                best = {x, v};
            }
        }
        partial[c] = best;
    };
    if (chunks == 1) {
        scan(0);
    } else {
        std::vector<std::jthread> threads;
        for (std::uint64_t c = 0; c < chunks; ++c) {
            threads.emplace_back(scan, c);
        }
    }
    Best best = partial.front();
    for (const Best &b : partial) {
        if (b.value > best.value) {
            best = b;
        }
    }
    return {BitString(n, best.x), best.value};
}

std::size_t count_optimal_assignments(const WeightedGraph &g, double value, double tol) {
    const std::size_t n = g.node_count();
    if (n > kMaxBruteForceNodes) {
        throw CapacityError("count_optimal_assignments: too many nodes");
    }
    std::size_t count = 0;
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < dim; ++x) {
        if (std::abs(cut_of_word(g.edges(), x) - value) <= tol) {
            ++count;
        }
    }
    return count;
}

const std::vector<int> &topology_19q_qubit_labels() {
    static const std::vector<int> labels = {0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
    return labels;
}

WeightedGraph topology_19q() {
    // Operable two-qubit couplers, by physical qubit label.
    static const std::pair<int, int> couplers[] = {
        {0, 5},   {0, 6},   {1, 6},   {1, 7},   {2, 7},   {2, 8},   {4, 9},
        {5, 10},  {6, 11},  {7, 12},  {8, 13},  {9, 14},  {10, 15}, {10, 16},
        {11, 16}, {11, 17}, {12, 17}, {12, 18}, {13, 18}, {13, 19}, {14, 19},
    };
    const auto &labels = topology_19q_qubit_labels();
    auto node_of = [&](int label) {
        return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
    };
    std::vector<Edge> edges;
    for (const auto &[a, b] : couplers) {
        edges.push_back({node_of(a), node_of(b), 1.0});
    }
    return WeightedGraph(labels.size(), std::move(edges));
}

WeightedGraph random_weights(const WeightedGraph &g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> weights(g.edge_count());
    for (double &w : weights) {
        w = rng.uniform_open_closed();
    }
    return g.with_weights(weights);
}

WeightedGraph random_graph(std::size_t n, double density, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < density) {
                edges.push_back({i, j, rng.uniform_open_closed()});
            }
        }
    }
    return WeightedGraph(n, std::move(edges));
}

} // namespace qcluster
