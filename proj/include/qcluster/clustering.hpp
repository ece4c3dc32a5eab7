#pragma once

#include "qcluster/graph.hpp"
#include "qcluster/solver.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace qcluster {

/// Uniform density on an axis-aligned rectangle.
struct Box {
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> size{1.0, 1.0};

    double area() const { return size[0] * size[1]; }
    double density(double x, double y) const;
    double lo(std::size_t axis) const { return center[axis] - 0.5 * size[axis]; }
    double hi(std::size_t axis) const { return center[axis] + 0.5 * size[axis]; }
};

/// Cells per axis of the integration grid.
inline constexpr std::size_t kOverlapGridResolution = 200;

/// Either feature vectors or box distributions, never inferred.
struct Dataset {
    enum class Kind { points, boxes };

    Kind kind = Kind::points;
    std::vector<std::vector<double>> points;
    std::vector<Box> boxes;

    std::size_t size() const { return kind == Kind::points ? points.size() : boxes.size(); }

    /// Throws invalid_argument for fewer than two elements, ragged
    /// dimensions or non-positive box sizes.
    void validate() const;

    static Dataset from_points(std::vector<std::vector<double>> points);
    static Dataset from_boxes(std::vector<Box> boxes);
};

/// {"kind": "points", "data": [[x, y, ...], ...]} or
/// {"kind": "boxes", "data": [{"center": [x, y], "size": [w, h]}, ...]}.
Dataset dataset_from_json(const nlohmann::json &doc);
nlohmann::json dataset_to_json(const Dataset &d);

/// Complete graph with w_ij = |x_i - x_j|; coincident points get no edge.
WeightedGraph euclidean_distance_matrix(const std::vector<std::vector<double>> &points);

/// Midpoint-rule integral of a density over its support rectangle on a
/// kOverlapGridResolution^2 grid.
double integrate_density(const Box &p);

/// b(p, q) = integral of sqrt(p q). The integrand vanishes outside the
/// intersection of the supports, so the grid covers only that rectangle.
/// Throws invalid_argument if either density does not integrate to 1 within 1e-6.
double bhattacharyya_coefficient(const Box &p, const Box &q);

/// Edge (i, j) with weight b(i, j) wherever b > 1e-9.
WeightedGraph overlap_graph(const std::vector<Box> &boxes);

/// Graph the dataset is clustered on: distances for points, overlaps for boxes.
WeightedGraph clustering_graph(const Dataset &d);

/// One label per element; 1 means the element is in S.
struct LabelAssignment {
    std::vector<int> labels;

    LabelAssignment flipped() const;
    /// Equal up to swapping the two cluster names.
    bool same_partition(const LabelAssignment &other) const;
};

nlohmann::json labels_to_json(const LabelAssignment &labels);

enum class MaxcutSolver { qaoa, brute_force };

struct BiclusterResult {
    LabelAssignment labels;
    double cut = 0.0;
    WeightedGraph graph;
};

/// Maxcut bi-clustering: build the graph, solve, read labels off the bits.
/// For box data the cut maximises inter-cluster overlap, so each cluster
/// collects mutually non-overlapping distributions.
BiclusterResult bicluster(const Dataset &d, MaxcutSolver solver, const QaoaSolveConfig &config = {},
                          std::uint64_t seed = 0);

/// Two isotropic Gaussian clouds in the plane of `per_cluster` points each,
/// centres `separation` apart, standard deviation `radius`. Ground-truth
/// labels are 0 for the first cloud and 1 for the second.
struct LabelledPoints {
    std::vector<std::vector<double>> points;
    LabelAssignment truth;
};
LabelledPoints gaussian_clusters(std::size_t per_cluster, double separation, double radius, std::uint64_t seed);

/// 19 boxes on the coupler lattice of the 19-qubit device, sized so two
/// boxes overlap exactly when their qubits share a coupler.
std::vector<Box> boxes_19q();

} // namespace qcluster
