#pragma once

#include "qcluster/graph.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qcluster {

using Complex = std::complex<double>;

/// Largest register the simulator will allocate (2^24 amplitudes, 256 MiB).
inline constexpr std::size_t kMaxQubits = 24;

/// Dense register of 2^n amplitudes. Bit k of a basis index is qubit k.
class StateVector {
public:
    /// |0...0>. Throws CapacityError for n > kMaxQubits, invalid_argument for n == 0.
    explicit StateVector(std::size_t n_qubits);

    std::size_t n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }

    std::span<Complex> amplitudes() { return amplitudes_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t index) const { return amplitudes_[index]; }

    double norm_squared() const;
    std::vector<double> probabilities() const;

    /// Applies the 2x2 matrix [[m00, m01], [m10, m11]] to `qubit`.
    void apply_1q(std::size_t qubit, Complex m00, Complex m01, Complex m10, Complex m11);
    void apply_h(std::size_t qubit);
    void apply_x(std::size_t qubit);
    void apply_y(std::size_t qubit);
    void apply_z(std::size_t qubit);
    /// RZ(theta) = diag(e^{-i theta/2}, e^{+i theta/2}).
    void apply_rz(std::size_t qubit, double theta);
    /// RX(theta) = exp(-i theta X / 2).
    void apply_rx(std::size_t qubit, double theta);
    void apply_cnot(std::size_t control, std::size_t target);
    void apply_cz(std::size_t a, std::size_t b);

private:
    void check_qubit(std::size_t q) const;

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// QAOA variational parameters: p cost angles and p driver angles.
class QaoaAngles {
public:
    /// Throws invalid_argument unless both lists have the same length p >= 1.
    QaoaAngles(std::vector<double> gammas, std::vector<double> betas);

    /// Flat layout (gamma_1..gamma_p, beta_1..beta_p), as seen by the optimizer.
    static QaoaAngles from_flat(std::span<const double> theta);
    std::vector<double> flat() const;

    std::size_t depth() const { return gammas_.size(); }
    const std::vector<double> &gammas() const { return gammas_; }
    const std::vector<double> &betas() const { return betas_; }

private:
    std::vector<double> gammas_;
    std::vector<double> betas_;
};

/// Readout bit flips plus an optional two-qubit depolarizing channel.
struct NoiseModel {
    /// One entry per qubit, or a single entry applied to every qubit. Each in [0, 0.5].
    std::vector<double> readout_flip_prob;
    /// Applied after each of the two entangling gates of every cost term. In [0, 1].
    double depolarizing_prob_2q = 0.0;
    /// Number of Pauli-error trajectories the shots are split across when
    /// depolarizing_prob_2q > 0.
    std::size_t trajectories = 10;

    /// Throws invalid_argument if a probability is out of range or the
    /// readout list does not fit `n_qubits`.
    void validate(std::size_t n_qubits) const;
    double flip_prob(std::size_t qubit) const;

    /// Readout errors 1 - F_RO per qubit from the device characterisation
    /// table, and the mean two-qubit process infidelity converted to a
    /// depolarizing probability. `qubit_labels` picks physical qubits.
    static NoiseModel device_table(const std::vector<int> &qubit_labels);
};

StateVector uniform_superposition(std::size_t n);

/// Multiplies amplitude x by exp(-i gamma E(x)), E = ising_energy. Diagonal,
/// never builds a matrix. Throws invalid_argument on size mismatch.
void apply_cost_unitary(StateVector &state, const WeightedGraph &g, double gamma);

/// Same with precomputed cut values (E = -cut), one per basis state.
void apply_cost_phases(StateVector &state, std::span<const double> cut_values, double gamma);

/// exp(-i beta sum_k X_k): every qubit gets [[cos b, -i sin b], [-i sin b, cos b]].
void apply_driver_unitary(StateVector &state, double beta);

/// V_p U_p ... V_1 U_1 applied to the uniform superposition.
StateVector prepare_qaoa_state(const WeightedGraph &g, const QaoaAngles &angles);

/// Draws i.i.d. basis states from |a|^2 by inverse CDF, then flips each
/// output bit with its readout probability. Deterministic given `seed`.
std::vector<BitString> sample_bitstrings(const StateVector &state, std::size_t n_shots, std::uint64_t seed,
                                         const std::optional<NoiseModel> &noise = std::nullopt);

/// QAOA evaluator for one graph: caches the diagonal cost table so repeated
/// state preparations cost O(p n 2^n).
class QaoaSimulator {
public:
    explicit QaoaSimulator(WeightedGraph g);

    const WeightedGraph &graph() const { return graph_; }
    std::size_t n_qubits() const { return graph_.node_count(); }
    /// cut value of every basis state
    const std::vector<double> &cut_values() const { return cuts_; }

    StateVector prepare(const QaoaAngles &angles) const;

    /// Shots as basis words. With a depolarizing channel the shots are split
    /// over noise.trajectories independently sampled Pauli-error circuits.
    std::vector<std::uint64_t> sample(const QaoaAngles &angles, std::size_t n_shots, std::uint64_t seed,
                                      const std::optional<NoiseModel> &noise = std::nullopt) const;

private:
    StateVector prepare_with_errors(const QaoaAngles &angles, double p_error, std::uint64_t seed) const;

    WeightedGraph graph_;
    std::vector<double> cuts_;
};

} // namespace qcluster
