#pragma once

#include "qcluster/graph.hpp"
#include "qcluster/statevector.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qcluster {

enum class GateKind { H, X, RZ, RX, CNOT, CZ, MEASURE };

std::string_view mnemonic(GateKind kind);
bool is_two_qubit(GateKind kind);
bool takes_angle(GateKind kind);

struct Gate {
    GateKind kind = GateKind::H;
    std::size_t q0 = 0;
    /// Second operand (target for CNOT); unused for single-qubit gates.
    std::size_t q1 = 0;
    /// Rotation angle for RZ / RX, zero otherwise.
    double angle = 0.0;

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// Native entangling gate the cost layer is lowered to.
enum class TwoQubitBasis { cnot, cz };

/// Linear gate list plus markers splitting the two-qubit gates into rounds
/// that may execute in parallel. round_markers()[k] is the instruction index
/// at which round k begins; a round lasts until the next marker.
class GateProgram {
public:
    explicit GateProgram(std::size_t n_qubits = 0) : n_qubits_(n_qubits) {}

    std::size_t n_qubits() const { return n_qubits_; }
    const std::vector<Gate> &instructions() const { return instructions_; }
    const std::vector<std::size_t> &round_markers() const { return round_markers_; }
    std::size_t size() const { return instructions_.size(); }

    /// Throws invalid_argument on out-of-range or coinciding operands, or on a
    /// two-qubit gate touching a qubit already used in the current round.
    void add(Gate gate);
    void add(GateKind kind, std::size_t q0, std::size_t q1 = 0, double angle = 0.0);

    /// Opens a new round at the next instruction index.
    void begin_round();

    /// Appends `other`, keeping its round boundaries.
    void append(const GateProgram &other);

    std::size_t count(GateKind kind) const;
    std::size_t two_qubit_count() const;

    /// Length of the longest chain of two-qubit gates that share qubits,
    /// single-qubit gates ignored.
    std::size_t two_qubit_depth() const;

    /// Rebuilds the program from parts, checking every invariant.
    static GateProgram from_parts(std::size_t n_qubits, std::vector<Gate> instructions,
                                  std::vector<std::size_t> round_markers);

private:
    std::size_t n_qubits_;
    std::vector<Gate> instructions_;
    std::vector<std::size_t> round_markers_;
    std::vector<char> busy_in_round_;
};

/// Partition of a graph's edges into vertex-disjoint rounds.
struct Schedule {
    std::vector<std::vector<Edge>> rounds;

    std::size_t edge_count() const;
};

/// Greedy edge colouring: edges in (u, v) order, each placed in the first
/// round with no endpoint conflict. Uses at most 2 * max_degree - 1 rounds.
Schedule schedule_edges(const WeightedGraph &g);

/// exp(-i gamma H_C) as CNOT . RZ(gamma w) . CNOT per edge, rounds in
/// schedule order. In the cz basis each CNOT becomes H . CZ . H on the target.
GateProgram compile_cost_layer(const WeightedGraph &g, double gamma, TwoQubitBasis basis);

/// H on every qubit, p x (cost layer, RX(2 beta) on every qubit), MEASURE all.
GateProgram compile_qaoa(const WeightedGraph &g, const QaoaAngles &angles, TwoQubitBasis basis);

/// Peephole pass over each qubit's gate sequence: cancels adjacent H.H pairs
/// and merges adjacent RZ.RZ into one RZ. Round markers follow the surviving
/// two-qubit gates.
GateProgram fuse_single_qubit_gates(const GateProgram &program);

/// Executes every non-MEASURE gate on `state` in program order.
void execute_program(const GateProgram &program, StateVector &state);

/// Executes on |0...0>.
StateVector run_program(const GateProgram &program);

/// Line-oriented text form. See docs/PROGRAM_FORMAT.md.
GateProgram parse_program(std::string_view text);
std::string emit_program(const GateProgram &program);

} // namespace qcluster
