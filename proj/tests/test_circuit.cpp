#include "oracles.hpp"

#include "qcluster/circuit.hpp"
#include "qcluster/errors.hpp"
#include "qcluster/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <set>

using namespace qcluster;

namespace {

void expect_valid_schedule(const WeightedGraph &g, const Schedule &s) {
    std::multiset<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &round : s.rounds) {
        std::set<std::size_t> used;
        for (const auto &e : round) {
            EXPECT_TRUE(used.insert(e.u).second);
            EXPECT_TRUE(used.insert(e.v).second);
            seen.insert({e.u, e.v});
        }
    }
    std::multiset<std::pair<std::size_t, std::size_t>> all;
    for (const auto &e : g.edges()) {
        all.insert({e.u, e.v});
    }
    EXPECT_EQ(seen, all);
}

oracle::Mat cost_layer_oracle(const WeightedGraph &g, double gamma) {
    return oracle::expm_i(oracle::cost_hamiltonian(g), gamma);
}

} // namespace

TEST(Schedule, PathTakesTwoRounds) {
    const WeightedGraph g(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}});
    const Schedule s = schedule_edges(g);
    EXPECT_EQ(s.rounds.size(), 2U);
    expect_valid_schedule(g, s);
}

TEST(Schedule, TriangleTakesThreeRounds) {
    const WeightedGraph g(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
    EXPECT_EQ(schedule_edges(g).rounds.size(), 3U);
}

TEST(Schedule, Topology19qTakesThreeRounds) {
    const WeightedGraph g = topology_19q();
    const Schedule s = schedule_edges(g);
    EXPECT_EQ(s.rounds.size(), 3U);
    EXPECT_EQ(s.edge_count(), 21U);
    expect_valid_schedule(g, s);
}

TEST(Schedule, ValidOnRandomGraphs) {
    Rng rng(31);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + rng.uniform_index(49);
        const WeightedGraph g = random_graph(n, rng.uniform(0.02, 0.5), rng.next_u64());
        const Schedule s = schedule_edges(g);
        expect_valid_schedule(g, s);
        if (g.edge_count() > 0) {
            EXPECT_LE(s.rounds.size(), 2 * g.max_degree() - 1);
        }
    }
}

TEST(Schedule, EdgeOrderIndependentOn19q) {
    const WeightedGraph g = random_weights(topology_19q(), 5);
    std::vector<Edge> shuffled = g.edges();
    Rng rng(3);
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);
    }
    for (auto &e : shuffled) {
        std::swap(e.u, e.v);
    }
    const WeightedGraph h(19, shuffled);
    EXPECT_EQ(schedule_edges(h).rounds.size(), 3U);
    EXPECT_EQ(emit_program(compile_cost_layer(g, 0.4, TwoQubitBasis::cz)),
              emit_program(compile_cost_layer(h, 0.4, TwoQubitBasis::cz)));
}

TEST(CompileCostLayer, SingleEdgeMatchesOracle) {
    const WeightedGraph g(2, {{0, 1, 1.0}});
    for (auto basis : {TwoQubitBasis::cnot, TwoQubitBasis::cz}) {
        for (double gamma : {0.0, 0.3, 1.9, -2.5}) {
            const oracle::Mat u = oracle::program_unitary(compile_cost_layer(g, gamma, basis));
            EXPECT_LT(oracle::distance_up_to_phase(u, cost_layer_oracle(g, gamma)), 1e-10);
        }
    }
}

TEST(CompileCostLayer, GammaZeroIsIdentity) {
    const WeightedGraph g = random_graph(5, 0.6, 3);
    const oracle::Mat u = oracle::program_unitary(compile_cost_layer(g, 0.0, TwoQubitBasis::cz));
    EXPECT_LT(oracle::distance_up_to_phase(u, oracle::Mat::Identity(32, 32)), 1e-10);
}

TEST(CompileCostLayer, GateCountsPerEdge) {
    const WeightedGraph g(2, {{0, 1, 0.5}});
    const GateProgram cnot = compile_cost_layer(g, 0.2, TwoQubitBasis::cnot);
    EXPECT_EQ(cnot.size(), 3U);
    EXPECT_EQ(cnot.count(GateKind::CNOT), 2U);
    EXPECT_DOUBLE_EQ(cnot.instructions()[1].angle, 0.2 * 0.5);
    const GateProgram cz = compile_cost_layer(g, 0.2, TwoQubitBasis::cz);
    EXPECT_EQ(cz.size(), 7U);
    EXPECT_EQ(cz.count(GateKind::CZ), 2U);
    EXPECT_EQ(cz.count(GateKind::H), 4U);
}

TEST(CompileCostLayer, Topology19qDepthSix) {
    const WeightedGraph g = random_weights(topology_19q(), 1);
    for (auto basis : {TwoQubitBasis::cnot, TwoQubitBasis::cz}) {
        const GateProgram prog = compile_cost_layer(g, 0.7, basis);
        EXPECT_EQ(prog.two_qubit_depth(), 6U);
        EXPECT_EQ(prog.round_markers().size(), 6U);
        EXPECT_EQ(prog.two_qubit_count(), 42U);
    }
}

TEST(CompileQaoa, InstructionCountFor19q) {
    const GateProgram prog = compile_qaoa(topology_19q(), QaoaAngles({0.3}, {0.2}), TwoQubitBasis::cnot);
    EXPECT_EQ(prog.count(GateKind::H), 19U);
    EXPECT_EQ(prog.count(GateKind::CNOT), 42U);
    EXPECT_EQ(prog.count(GateKind::RZ), 21U);
    EXPECT_EQ(prog.count(GateKind::RX), 19U);
    EXPECT_EQ(prog.count(GateKind::MEASURE), 19U);
    EXPECT_EQ(prog.size(), 19U + 21U * 3U + 19U + 19U);
}

TEST(CompileQaoa, TwoQubitProgramReproducesState) {
    const WeightedGraph g(2, {{0, 1, 0.8}});
    const QaoaAngles angles({1.1}, {0.35});
    const StateVector run = run_program(compile_qaoa(g, angles, TwoQubitBasis::cz));
    const auto expected = prepare_qaoa_state(g, angles).probabilities();
    const auto got = run.probabilities();
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(got[i], expected[i], 1e-10);
    }
}

TEST(CompileQaoa, RandomProgramsMatchSimulator) {
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng.uniform_index(5);
        const std::size_t p = 1 + rng.uniform_index(3);
        const WeightedGraph g = random_graph(n, 0.7, rng.next_u64());
        std::vector<double> gs(p), bs(p);
        for (std::size_t i = 0; i < p; ++i) {
            gs[i] = rng.uniform(0, 2 * std::numbers::pi);
            bs[i] = rng.uniform(0, 2 * std::numbers::pi);
        }
        const QaoaAngles angles(gs, bs);
        const auto basis = t % 2 ? TwoQubitBasis::cz : TwoQubitBasis::cnot;
        GateProgram prog = compile_qaoa(g, angles, basis);
        if (t % 3 == 0) {
            prog = fuse_single_qubit_gates(prog);
        }
        const StateVector s = run_program(prog);
        const StateVector ref = prepare_qaoa_state(g, angles);
        EXPECT_LT(oracle::distance_up_to_phase(oracle::to_eigen(s.amplitudes()), oracle::to_eigen(ref.amplitudes())),
                  1e-9);
    }
}

TEST(CompileCostLayer, RandomLayersMatchDenseExponential) {
    Rng rng(8);
    for (int t = 0; t < 15; ++t) {
        const std::size_t n = 2 + rng.uniform_index(5);
        const WeightedGraph g = random_graph(n, 0.8, rng.next_u64());
        const double gamma = rng.uniform(-4, 4);
        const auto basis = t % 2 ? TwoQubitBasis::cz : TwoQubitBasis::cnot;
        const oracle::Mat u = oracle::program_unitary(compile_cost_layer(g, gamma, basis));
        EXPECT_LT(oracle::distance_up_to_phase(u, cost_layer_oracle(g, gamma)), 1e-10);
    }
}

TEST(GateProgram, RejectsBadOperands) {
    GateProgram prog(3);
    EXPECT_THROW(prog.add(GateKind::H, 3), std::invalid_argument);
    EXPECT_THROW(prog.add(GateKind::CNOT, 1, 1), std::invalid_argument);
    prog.begin_round();
    prog.add(GateKind::CZ, 0, 1);
    EXPECT_THROW(prog.add(GateKind::CZ, 1, 2), std::invalid_argument);
    prog.begin_round();
    EXPECT_NO_THROW(prog.add(GateKind::CZ, 1, 2));
}

TEST(Fusion, CancelsAndMerges) {
    GateProgram prog(2);
    prog.add(GateKind::H, 0);
    prog.add(GateKind::H, 0);
    prog.add(GateKind::RZ, 1, 0, 0.25);
    prog.add(GateKind::RZ, 1, 0, 0.5);
    prog.add(GateKind::X, 0);
    const GateProgram fused = fuse_single_qubit_gates(prog);
    ASSERT_EQ(fused.size(), 2U);
    EXPECT_EQ(fused.count(GateKind::H), 0U);
    EXPECT_EQ(fused.count(GateKind::RZ), 1U);
    for (const auto &g : fused.instructions()) {
        if (g.kind == GateKind::RZ) {
            EXPECT_DOUBLE_EQ(g.angle, 0.75);
        }
    }
}

TEST(Fusion, ShrinksCzProgramAndKeepsUnitary) {
    const WeightedGraph g = random_weights(topology_19q(), 2);
    const GateProgram prog = compile_qaoa(g, QaoaAngles({0.5}, {0.3}), TwoQubitBasis::cz);
    const GateProgram fused = fuse_single_qubit_gates(prog);
    EXPECT_LT(fused.size(), prog.size());
    EXPECT_EQ(fused.two_qubit_count(), prog.two_qubit_count());
    EXPECT_EQ(fused.two_qubit_depth(), 6U);

    const WeightedGraph small = random_graph(5, 0.8, 6);
    const GateProgram p2 = compile_cost_layer(small, 0.9, TwoQubitBasis::cz);
    EXPECT_LT(oracle::distance_up_to_phase(oracle::program_unitary(fuse_single_qubit_gates(p2)),
                                           oracle::program_unitary(p2)),
              1e-10);
}
