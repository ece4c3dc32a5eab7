#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcluster {

/// Largest graph brute_force_maxcut will enumerate.
inline constexpr std::size_t kMaxBruteForceNodes = 28;

/// Undirected weighted edge. Stored canonically with u < v.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    double weight = 0.0;

    friend bool operator==(const Edge &, const Edge &) = default;
};

/// An n-bit cut assignment. Bit k set means vertex k is in S.
///
/// The same 64-bit word is the computational basis index of the simulator
/// (bit k of the index is qubit k). The text form is written most
/// significant bit first, like a binary literal: for n = 2 the string "01"
/// has bit 0 set.
class BitString {
public:
    BitString() = default;
    BitString(std::size_t size, std::uint64_t bits);

    static BitString from_string(const std::string &text);

    std::size_t size() const { return size_; }
    std::uint64_t bits() const { return bits_; }
    bool bit(std::size_t k) const { return (bits_ >> k) & 1U; }

    /// Ising spin of vertex k: +1 for bit 0, -1 for bit 1.
    int spin(std::size_t k) const { return bit(k) ? -1 : 1; }

    BitString complement() const;
    std::string to_string() const;

    friend bool operator==(const BitString &, const BitString &) = default;

private:
    std::size_t size_ = 0;
    std::uint64_t bits_ = 0;
};

/// Symmetric graph with non-negative weights held as a canonical edge list.
/// Edges of weight exactly zero are dropped: weight 0 and "no edge" are the
/// same thing. Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Throws std::invalid_argument on out-of-range endpoints, self-loops,
    /// negative or non-finite weights, or duplicate pairs (in either order).
    WeightedGraph(std::size_t node_count, std::vector<Edge> edges);

    std::size_t node_count() const { return node_count_; }
    const std::vector<Edge> &edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    double total_weight() const;
    double weight(std::size_t i, std::size_t j) const;
    std::vector<std::size_t> degrees() const;
    std::size_t max_degree() const;

    /// Row-major n x n adjacency matrix with zero diagonal.
    std::vector<double> dense_matrix() const;

    /// Same topology, new weights in edge order. Zero weights remove edges.
    WeightedGraph with_weights(const std::vector<double> &weights) const;

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
};

/// Sum of weights over edges whose endpoints fall on different sides.
double cut_cost(const WeightedGraph &g, const BitString &assignment);

/// Ising energy with one unit per cut edge: exactly -cut_cost.
double ising_energy(const WeightedGraph &g, const BitString &assignment);

/// Cut cost of every basis state 0 .. 2^n - 1. Entry x is bitwise identical
/// to cut_cost(g, BitString(n, x)) since both sum the same terms in edge order.
std::vector<double> cut_table(const WeightedGraph &g);

struct MaxcutSolution {
    BitString assignment;
    double value = 0.0;
};

/// Exhaustive Maxcut. Among maximisers returns the one with the smallest
/// integer value. Throws CapacityError above kMaxBruteForceNodes.
MaxcutSolution brute_force_maxcut(const WeightedGraph &g);

/// Number of assignments attaining `value` (within `tol`). Enumerates.
std::size_t count_optimal_assignments(const WeightedGraph &g, double value, double tol = 1e-9);

/// Coupling graph of the 19-qubit processor: the tunable/fixed couplers of
/// the 20-transmon lattice with qubit 3 and its couplers removed. Node k
/// corresponds to physical qubit topology_19q_qubit_labels()[k]. Unit weights.
WeightedGraph topology_19q();
const std::vector<int> &topology_19q_qubit_labels();

/// Same edge set with weights drawn i.i.d. uniform on (0, 1].
WeightedGraph random_weights(const WeightedGraph &g, std::uint64_t seed);

/// Erdos-Renyi style graph with edge probability `density` and uniform (0,1]
/// weights. Used by tests and benchmarks.
WeightedGraph random_graph(std::size_t n, double density, std::uint64_t seed);

} // namespace qcluster
