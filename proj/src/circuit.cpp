#include "qcluster/circuit.hpp"

#include <algorithm>
#include <stdexcept>

namespace qcluster {

std::string_view mnemonic(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::X:
        return "X";
    case GateKind::RZ:
        return "RZ";
    case GateKind::RX:
        return "RX";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CZ:
        return "CZ";
    case GateKind::MEASURE:
        return "MEASURE";
    }
    return "?";
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT || kind == GateKind::CZ; }

bool takes_angle(GateKind kind) { return kind == GateKind::RZ || kind == GateKind::RX; }

void GateProgram::add(Gate gate) {
    if (gate.q0 >= n_qubits_ || (is_two_qubit(gate.kind) && gate.q1 >= n_qubits_)) {
        throw std::invalid_argument("gate operand out of range for " + std::to_string(n_qubits_) + " qubits");
    }
    if (is_two_qubit(gate.kind)) {
        if (gate.q0 == gate.q1) {
            throw std::invalid_argument(std::string(mnemonic(gate.kind)) + " operands must be distinct");
        }
        if (!round_markers_.empty()) {
            if (busy_in_round_[gate.q0] || busy_in_round_[gate.q1]) {
                throw std::invalid_argument("qubit used twice in round " + std::to_string(round_markers_.size() - 1));
            }
            busy_in_round_[gate.q0] = busy_in_round_[gate.q1] = 1;
        }
    } else {
        gate.q1 = 0;
    }
    if (!takes_angle(gate.kind)) {
        gate.angle = 0.0;
    }
    instructions_.push_back(gate);
}

void GateProgram::add(GateKind kind, std::size_t q0, std::size_t q1, double angle) { add(Gate{kind, q0, q1, angle}); }

void GateProgram::begin_round() {
    if (!round_markers_.empty() && round_markers_.back() == instructions_.size()) {
        throw std::invalid_argument("empty round");
    }
    round_markers_.push_back(instructions_.size());
    busy_in_round_.assign(n_qubits_, 0);
}

void GateProgram::append(const GateProgram &other) {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("cannot append programs over different registers");
    }
    std::size_t next_marker = 0;
    for (std::size_t k = 0; k < other.instructions_.size(); ++k) {
        if (next_marker < other.round_markers_.size() && other.round_markers_[next_marker] == k) {
            begin_round();
            ++next_marker;
        }
        add(other.instructions_[k]);
    }
}

std::size_t GateProgram::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(instructions_.begin(), instructions_.end(), [kind](const Gate &g) { return g.kind == kind; }));
}

std::size_t GateProgram::two_qubit_count() const { return count(GateKind::CNOT) + count(GateKind::CZ); }

std::size_t GateProgram::two_qubit_depth() const {
    std::vector<std::size_t> level(n_qubits_, 0);
    std::size_t depth = 0;
    for (const Gate &g : instructions_) {
        if (is_two_qubit(g.kind)) {
            const std::size_t d = std::max(level[g.q0], level[g.q1]) + 1;
            level[g.q0] = level[g.q1] = d;
            depth = std::max(depth, d);
        }
    }
    return depth;
}

GateProgram GateProgram::from_parts(std::size_t n_qubits, std::vector<Gate> instructions,
                                    std::vector<std::size_t> round_markers) {
    GateProgram program(n_qubits);
    std::sort(round_markers.begin(), round_markers.end());
    std::size_t next_marker = 0;
    for (std::size_t k = 0; k < instructions.size(); ++k) {
        while (next_marker < round_markers.size() && round_markers[next_marker] == k) {
            program.begin_round();
            ++next_marker;
        }
        program.add(instructions[k]);
    }
    if (next_marker != round_markers.size()) {
        throw std::invalid_argument("round marker past the last instruction");
    }
    return program;
}

std::size_t Schedule::edge_count() const {
    std::size_t total = 0;
    for (const auto &round : rounds) {
        total += round.size();
    }
    return total;
}

Schedule schedule_edges(const WeightedGraph &g) {
    std::vector<Edge> edges = g.edges();
    std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    Schedule schedule;
    std::vector<std::vector<char>> used; // used[round][vertex]
    for (const Edge &e : edges) {
        std::size_t r = 0;
        while (r < used.size() && (used[r][e.u] || used[r][e.v])) {
            ++r;
        }
        if (r == used.size()) {
            used.emplace_back(g.node_count(), 0);
            schedule.rounds.emplace_back();
        }
        used[r][e.u] = used[r][e.v] = 1;
        schedule.rounds[r].push_back(e);
    }
    return schedule;
}

GateProgram compile_cost_layer(const WeightedGraph &g, double gamma, TwoQubitBasis basis) {
    GateProgram program(g.node_count());
    const Schedule schedule = schedule_edges(g);
    const bool cz = basis == TwoQubitBasis::cz;
    auto entangle_all = [&](const std::vector<Edge> &round) {
        if (cz) {
            for (const Edge &e : round) {
                program.add(GateKind::H, e.v);
            }
        }
        program.begin_round();
        for (const Edge &e : round) {
            program.add(cz ? GateKind::CZ : GateKind::CNOT, e.u, e.v);
        }
        if (cz) {
            for (const Edge &e : round) {
                program.add(GateKind::H, e.v);
            }
        }
    };
    for (const auto &round : schedule.rounds) {
        entangle_all(round);
        for (const Edge &e : round) {
            // CNOT . RZ(theta) . CNOT = exp(-i theta/2 Z_u Z_v); the relative
            // phase between cut and uncut pairs is then e^{i theta}.
            program.add(GateKind::RZ, e.v, 0, gamma * e.weight);
        }
        entangle_all(round);
    }
    return program;
}

GateProgram compile_qaoa(const WeightedGraph &g, const QaoaAngles &angles, TwoQubitBasis basis) {
    const std::size_t n = g.node_count();
    GateProgram program(n);
    for (std::size_t q = 0; q < n; ++q) {
        program.add(GateKind::H, q);
    }
    for (std::size_t layer = 0; layer < angles.depth(); ++layer) {
        program.append(compile_cost_layer(g, angles.gammas()[layer], basis));
        for (std::size_t q = 0; q < n; ++q) {
            program.add(GateKind::RX, q, 0, 2.0 * angles.betas()[layer]);
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        program.add(GateKind::MEASURE, q);
    }
    return program;
}

GateProgram fuse_single_qubit_gates(const GateProgram &program) {
    const auto &in = program.instructions();
    std::vector<Gate> gates = in;
    std::vector<char> alive(in.size(), 1);
    // Per qubit, indices of surviving gates that touch it, most recent last.
    std::vector<std::vector<std::size_t>> history(program.n_qubits());

    for (std::size_t k = 0; k < gates.size(); ++k) {
        const Gate &g = gates[k];
        if (is_two_qubit(g.kind)) {
            history[g.q0].push_back(k);
            history[g.q1].push_back(k);
            continue;
        }
        auto &h = history[g.q0];
        if (!h.empty()) {
            Gate &prev = gates[h.back()];
            const bool prev_single = !is_two_qubit(prev.kind);
            if (prev_single && g.kind == GateKind::H && prev.kind == GateKind::H) {
                alive[h.back()] = 0;
                alive[k] = 0;
                h.pop_back();
                continue;
            }
            if (prev_single && g.kind == GateKind::RZ && prev.kind == GateKind::RZ) {
                prev.angle += g.angle;
                alive[k] = 0;
                continue;
            }
        }
        h.push_back(k);
    }

    std::vector<Gate> out;
    std::vector<std::size_t> new_index(in.size() + 1, 0);
    for (std::size_t k = 0; k < gates.size(); ++k) {
        new_index[k] = out.size();
        if (alive[k]) {
            out.push_back(gates[k]);
        }
    }
    new_index[in.size()] = out.size();
    std::vector<std::size_t> markers;
    for (std::size_t m : program.round_markers()) {
        const std::size_t idx = new_index[m];
        if (idx < out.size() && (markers.empty() || markers.back() != idx)) {
            markers.push_back(idx);
        }
    }
    return GateProgram::from_parts(program.n_qubits(), std::move(out), std::move(markers));
}

void execute_program(const GateProgram &program, StateVector &state) {
    if (state.n_qubits() != program.n_qubits()) {
        throw std::invalid_argument("program and state sizes differ");
    }
    for (const Gate &g : program.instructions()) {
        switch (g.kind) {
        case GateKind::H:
            state.apply_h(g.q0);
            break;
        case GateKind::X:
            state.apply_x(g.q0);
            break;
        case GateKind::RZ:
            state.apply_rz(g.q0, g.angle);
            break;
        case GateKind::RX:
            state.apply_rx(g.q0, g.angle);
            break;
        case GateKind::CNOT:
            state.apply_cnot(g.q0, g.q1);
            break;
        case GateKind::CZ:
            state.apply_cz(g.q0, g.q1);
            break;
        case GateKind::MEASURE:
            break;
        }
    }
}

StateVector run_program(const GateProgram &program) {
    StateVector state(program.n_qubits());
    execute_program(program, state);
    return state;
}

} // namespace qcluster
