#include "qcluster/statevector.hpp"

#include "qcluster/errors.hpp"
#include "qcluster/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qcluster {

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0) {
        throw std::invalid_argument("state vector needs at least one qubit");
    }
    if (n_qubits > kMaxQubits) {
        throw CapacityError(std::to_string(n_qubits) + " qubits exceeds the simulator limit of " +
                            std::to_string(kMaxQubits));
    }
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const Complex &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

std::vector<double> StateVector::probabilities() const {
    std::vector<double> p(amplitudes_.size());
    std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(), [](const Complex &a) { return std::norm(a); });
    return p;
}

void StateVector::check_qubit(std::size_t q) const {
    if (q >= n_qubits_) {
        throw std::invalid_argument("qubit " + std::to_string(q) + " out of range");
    }
}

void StateVector::apply_1q(std::size_t qubit, Complex m00, Complex m01, Complex m10, Complex m11) {
    check_qubit(qubit);
    const std::size_t stride = std::size_t{1} << qubit;
    const std::size_t dim = amplitudes_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            const Complex a0 = amplitudes_[k];
            const Complex a1 = amplitudes_[k + stride];
            amplitudes_[k] = m00 * a0 + m01 * a1;
            amplitudes_[k + stride] = m10 * a0 + m11 * a1;
        }
    }
}

void StateVector::apply_h(std::size_t qubit) {
    const double r = 1.0 / std::sqrt(2.0);
    apply_1q(qubit, r, r, r, -r);
}

void StateVector::apply_x(std::size_t qubit) { apply_1q(qubit, 0.0, 1.0, 1.0, 0.0); }

void StateVector::apply_y(std::size_t qubit) { apply_1q(qubit, 0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0); }

void StateVector::apply_z(std::size_t qubit) { apply_1q(qubit, 1.0, 0.0, 0.0, -1.0); }

void StateVector::apply_rz(std::size_t qubit, double theta) {
    apply_1q(qubit, std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2));
}

void StateVector::apply_rx(std::size_t qubit, double theta) {
    const double c = std::cos(theta / 2);
    const Complex s{0.0, -std::sin(theta / 2)};
    apply_1q(qubit, c, s, s, c);
}

void StateVector::apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw std::invalid_argument("CNOT operands must differ");
    }
    const std::size_t cm = std::size_t{1} << control;
    const std::size_t tm = std::size_t{1} << target;
    for (std::size_t x = 0; x < amplitudes_.size(); ++x) {
        if ((x & cm) && !(x & tm)) {
            std::swap(amplitudes_[x], amplitudes_[x | tm]);
        }
    }
}

void StateVector::apply_cz(std::size_t a, std::size_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) {
        throw std::invalid_argument("CZ operands must differ");
    }
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t x = 0; x < amplitudes_.size(); ++x) {
        if ((x & mask) == mask) {
            amplitudes_[x] = -amplitudes_[x];
        }
    }
}

QaoaAngles::QaoaAngles(std::vector<double> gammas, std::vector<double> betas)
    : gammas_(std::move(gammas)), betas_(std::move(betas)) {
    if (gammas_.empty() || gammas_.size() != betas_.size()) {
        throw std::invalid_argument("QAOA angles need equal, non-zero numbers of gammas and betas");
    }
}

QaoaAngles QaoaAngles::from_flat(std::span<const double> theta) {
    if (theta.size() % 2 != 0) {
        throw std::invalid_argument("flat QAOA angle vector must have even length");
    }
    const std::size_t p = theta.size() / 2;
    return QaoaAngles({theta.begin(), theta.begin() + p}, {theta.begin() + p, theta.end()});
}

std::vector<double> QaoaAngles::flat() const {
    std::vector<double> out = gammas_;
    out.insert(out.end(), betas_.begin(), betas_.end());
    return out;
}

void NoiseModel::validate(std::size_t n_qubits) const {
    if (readout_flip_prob.size() > 1 && readout_flip_prob.size() != n_qubits) {
        throw std::invalid_argument("readout_flip_prob has " + std::to_string(readout_flip_prob.size()) +
                                    " entries for " + std::to_string(n_qubits) + " qubits");
    }
    for (double p : readout_flip_prob) {
        if (!(p >= 0.0 && p <= 0.5)) {
            throw std::invalid_argument("readout flip probabilities must lie in [0, 0.5]");
        }
    }
    if (!(depolarizing_prob_2q >= 0.0 && depolarizing_prob_2q <= 1.0)) {
        throw std::invalid_argument("depolarizing_prob_2q must lie in [0, 1]");
    }
    if (depolarizing_prob_2q > 0.0 && trajectories == 0) {
        throw std::invalid_argument("depolarizing noise needs at least one trajectory");
    }
}

double NoiseModel::flip_prob(std::size_t qubit) const {
    if (readout_flip_prob.empty()) {
        return 0.0;
    }
    return readout_flip_prob.size() == 1 ? readout_flip_prob.front() : readout_flip_prob[qubit];
}

NoiseModel NoiseModel::device_table(const std::vector<int> &qubit_labels) {
    // Assignment fidelity F_RO of physical qubits 0..19.
    static constexpr double kReadoutFidelity[20] = {
        0.938, 0.958, 0.970, 0.886, 0.953, 0.965, 0.840, 0.925, 0.947, 0.927,
        0.942, 0.900, 0.942, 0.921, 0.947, 0.970, 0.948, 0.921, 0.930, 0.930,
    };
    // Two-qubit process fidelities of the 21 operable couplers.
    static constexpr double kCzFidelity[21] = {
        0.936, 0.889, 0.888, 0.919, 0.817, 0.906, 0.854, 0.870, 0.838, 0.870, 0.881,
        0.872, 0.854, 0.838, 0.891, 0.844, 0.876, 0.886, 0.936, 0.921, 0.797,
    };
    NoiseModel model;
    for (int label : qubit_labels) {
        if (label < 0 || label >= 20) {
            throw std::invalid_argument("device table covers qubits 0..19 only");
        }
        model.readout_flip_prob.push_back(1.0 - kReadoutFidelity[label]);
    }
    const double mean_fidelity = std::accumulate(std::begin(kCzFidelity), std::end(kCzFidelity), 0.0) / 21.0;
    // A two-qubit depolarizing channel with probability p has process fidelity 1 - 15p/16.
    model.depolarizing_prob_2q = std::min(1.0, (1.0 - mean_fidelity) * 16.0 / 15.0);
    return model;
}

StateVector uniform_superposition(std::size_t n) {
    StateVector state(n);
    const double a = std::pow(2.0, -0.5 * static_cast<double>(n));
    for (Complex &amp : state.amplitudes()) {
        amp = a;
    }
    return state;
}

void apply_cost_phases(StateVector &state, std::span<const double> cut_values, double gamma) {
    if (cut_values.size() != state.dimension()) {
        throw std::invalid_argument("cost table size does not match the state dimension");
    }
    auto amps = state.amplitudes();
    for (std::size_t x = 0; x < amps.size(); ++x) {
        // E(x) = -cut(x)
        amps[x] *= std::polar(1.0, gamma * cut_values[x]);
    }
}

void apply_cost_unitary(StateVector &state, const WeightedGraph &g, double gamma) {
    if (state.n_qubits() != g.node_count()) {
        throw std::invalid_argument("state has " + std::to_string(state.n_qubits()) + " qubits, graph has " +
                                    std::to_string(g.node_count()) + " nodes");
    }
    apply_cost_phases(state, cut_table(g), gamma);
}

void apply_driver_unitary(StateVector &state, double beta) {
    const double c = std::cos(beta);
    const Complex s{0.0, -std::sin(beta)};
    for (std::size_t q = 0; q < state.n_qubits(); ++q) {
        state.apply_1q(q, c, s, s, c);
    }
}

StateVector prepare_qaoa_state(const WeightedGraph &g, const QaoaAngles &angles) {
    return QaoaSimulator(g).prepare(angles);
}

namespace {

std::vector<double> cumulative(const StateVector &state) {
    std::vector<double> cdf(state.dimension());
    double running = 0.0;
    const auto amps = state.amplitudes();
    for (std::size_t x = 0; x < cdf.size(); ++x) {
        running += std::norm(amps[x]);
        cdf[x] = running;
    }
    return cdf;
}

// Appends n_shots words drawn from `cdf` (unnormalised running sum).
void draw(const std::vector<double> &cdf, std::size_t n_shots, Rng &rng, std::vector<std::uint64_t> &out) {
    const double total = cdf.back();
    for (std::size_t s = 0; s < n_shots; ++s) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) {
            --it;
        }
        out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
    }
}

void apply_readout(std::vector<std::uint64_t> &words, std::size_t n_qubits, const NoiseModel &noise, Rng &rng) {
    for (std::uint64_t &w : words) {
        for (std::size_t q = 0; q < n_qubits; ++q) {
            const double p = noise.flip_prob(q);
            if (p > 0.0 && rng.bernoulli(p)) {
                w ^= std::uint64_t{1} << q;
            }
        }
    }
}

void apply_pauli(StateVector &state, std::size_t qubit, std::uint64_t which) {
    switch (which) {
    case 1:
        state.apply_x(qubit);
        break;
    case 2:
        state.apply_y(qubit);
        break;
    case 3:
        state.apply_z(qubit);
        break;
    default:
        break;
    }
}

} // namespace

std::vector<BitString> sample_bitstrings(const StateVector &state, std::size_t n_shots, std::uint64_t seed,
                                         const std::optional<NoiseModel> &noise) {
    if (n_shots == 0) {
        throw std::invalid_argument("n_shots must be at least 1");
    }
    if (noise) {
        noise->validate(state.n_qubits());
    }
    Rng rng(seed);
    std::vector<std::uint64_t> words;
    words.reserve(n_shots);
    draw(cumulative(state), n_shots, rng, words);
    if (noise) {
        apply_readout(words, state.n_qubits(), *noise, rng);
    }
    std::vector<BitString> out;
    out.reserve(words.size());
    for (std::uint64_t w : words) {
        out.emplace_back(state.n_qubits(), w);
    }
    return out;
}

QaoaSimulator::QaoaSimulator(WeightedGraph g) : graph_(std::move(g)) {
    if (graph_.node_count() > kMaxQubits) {
        throw CapacityError(std::to_string(graph_.node_count()) + " qubits exceeds the simulator limit of " +
                            std::to_string(kMaxQubits));
    }
    cuts_ = cut_table(graph_);
}

StateVector QaoaSimulator::prepare(const QaoaAngles &angles) const {
    StateVector state = uniform_superposition(n_qubits());
    for (std::size_t layer = 0; layer < angles.depth(); ++layer) {
        apply_cost_phases(state, cuts_, angles.gammas()[layer]);
        apply_driver_unitary(state, angles.betas()[layer]);
    }
    return state;
}

StateVector QaoaSimulator::prepare_with_errors(const QaoaAngles &angles, double p_error, std::uint64_t seed) const {
    Rng rng(seed);
    StateVector state = uniform_superposition(n_qubits());
    const std::size_t dim = state.dimension();
    for (std::size_t layer = 0; layer < angles.depth(); ++layer) {
        const double gamma = angles.gammas()[layer];
        for (const Edge &e : graph_.edges()) {
            const Complex phase = std::polar(1.0, gamma * e.weight);
            const std::size_t mu = std::size_t{1} << e.u;
            const std::size_t mv = std::size_t{1} << e.v;
            auto amps = state.amplitudes();
            for (std::size_t x = 0; x < dim; ++x) {
                if (((x & mu) != 0) != ((x & mv) != 0)) {
                    amps[x] *= phase;
                }
            }
            // One channel use per entangling gate of the term.
            for (int gate = 0; gate < 2; ++gate) {
                if (rng.bernoulli(p_error)) {
                    const std::uint64_t pauli = 1 + rng.uniform_index(15);
                    apply_pauli(state, e.u, pauli & 3U);
                    apply_pauli(state, e.v, pauli >> 2);
                }
            }
        }
        apply_driver_unitary(state, angles.betas()[layer]);
    }
    return state;
}

std::vector<std::uint64_t> QaoaSimulator::sample(const QaoaAngles &angles, std::size_t n_shots, std::uint64_t seed,
                                                 const std::optional<NoiseModel> &noise) const {
    if (n_shots == 0) {
        throw std::invalid_argument("n_shots must be at least 1");
    }
    if (noise) {
        noise->validate(n_qubits());
    }
    std::vector<std::uint64_t> words;
    words.reserve(n_shots);
    Rng rng(seed);
    if (noise && noise->depolarizing_prob_2q > 0.0) {
        const std::size_t k = std::min(noise->trajectories, n_shots);
        for (std::size_t t = 0; t < k; ++t) {
            const std::size_t shots = n_shots * (t + 1) / k - n_shots * t / k;
            const StateVector state = prepare_with_errors(angles, noise->depolarizing_prob_2q, derive_seed(seed, t + 1));
            draw(cumulative(state), shots, rng, words);
        }
    } else {
        draw(cumulative(prepare(angles)), n_shots, rng, words);
    }
    if (noise) {
        apply_readout(words, n_qubits(), *noise, rng);
    }
    return words;
}

} // namespace qcluster
