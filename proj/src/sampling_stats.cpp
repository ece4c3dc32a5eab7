#include "qcluster/sampling_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

namespace qcluster {

CostSample evaluate_distribution(const QaoaSimulator &sim, const QaoaAngles &angles, std::size_t n_shots,
                                 std::uint64_t seed, const std::optional<NoiseModel> &noise) {
    const auto words = sim.sample(angles, n_shots, seed, noise);
    const auto &cuts = sim.cut_values();
    CostSample sample;
    sample.values.reserve(words.size());
    std::uint64_t best = words.front();
    for (std::uint64_t w : words) {
        sample.values.push_back(cuts[w]);
        if (cuts[w] > cuts[best]) {
            best = w;
        }
    }
    sample.best_bitstring = BitString(sim.n_qubits(), best);
    return sample;
}

CostSample evaluate_distribution(const WeightedGraph &g, const QaoaAngles &angles, std::size_t n_shots,
                                 std::uint64_t seed, const std::optional<NoiseModel> &noise) {
    return evaluate_distribution(QaoaSimulator(g), angles, n_shots, seed, noise);
}

double best_statistic(const CostSample &s) {
    if (s.values.empty()) {
        throw std::invalid_argument("empty cost sample");
    }
    return *std::max_element(s.values.begin(), s.values.end());
}

double mean_statistic(const CostSample &s) {
    if (s.values.empty()) {
        throw std::invalid_argument("empty cost sample");
    }
    return std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(s.values.size());
}

DiscreteDistribution::DiscreteDistribution(std::vector<double> values, std::vector<double> probabilities) {
    if (values.empty() || values.size() != probabilities.size()) {
        throw std::invalid_argument("distribution needs matching, non-empty value and probability lists");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    double total = 0.0;
    for (std::size_t k : order) {
        const double p = probabilities[k];
        if (!(p >= 0.0) || !std::isfinite(values[k])) {
            throw std::invalid_argument("probabilities must be non-negative and values finite");
        }
        total += p;
        if (!values_.empty() && values_.back() == values[k]) {
            probabilities_.back() += p;
        } else {
            values_.push_back(values[k]);
            probabilities_.push_back(p);
        }
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", expected 1");
    }
    cdf_.resize(values_.size());
    std::partial_sum(probabilities_.begin(), probabilities_.end(), cdf_.begin());
    cdf_.back() = 1.0;
}

DiscreteDistribution DiscreteDistribution::empirical(std::span<const double> sample) {
    if (sample.empty()) {
        throw std::invalid_argument("empirical distribution of an empty sample");
    }
    std::vector<double> values(sample.begin(), sample.end());
    std::sort(values.begin(), values.end());
    std::vector<double> atoms;
    std::vector<double> probs;
    const double w = 1.0 / static_cast<double>(values.size());
    for (std::size_t k = 0; k < values.size();) {
        std::size_t end = k;
        while (end < values.size() && values[end] == values[k]) {
            ++end;
        }
        atoms.push_back(values[k]);
        probs.push_back(static_cast<double>(end - k) * w);
        k = end;
    }
    return DiscreteDistribution(std::move(atoms), std::move(probs));
}

double DiscreteDistribution::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        m += values_[k] * probabilities_[k];
    }
    return m;
}

DiscreteDistribution order_statistic_pdf(const DiscreteDistribution &dist, std::size_t j, std::size_t n) {
    if (n == 0 || j == 0 || j > n) {
        throw std::invalid_argument("order statistic rank must satisfy 1 <= j <= N");
    }
    const auto &cdf = dist.cdf();
    const double a = static_cast<double>(j);
    const double b = static_cast<double>(n - j + 1);
    // P(X_(j) <= v) = P(at least j of n draws are <= v) = I_F(v)(j, n - j + 1)
    auto at_least_j = [&](double f) {
        if (f <= 0.0) {
            return 0.0;
        }
        if (f >= 1.0) {
            return 1.0;
        }
        return boost::math::ibeta(a, b, f);
    };
    std::vector<double> probs(cdf.size());
    double previous = 0.0;
    for (std::size_t k = 0; k < cdf.size(); ++k) {
        const double current = at_least_j(cdf[k]);
        probs[k] = std::max(0.0, current - previous);
        previous = current;
    }
    return DiscreteDistribution(dist.values(), std::move(probs));
}

ExtremeValues extreme_value_expectations(const DiscreteDistribution &dist, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("sample size must be at least 1");
    }
    const auto &v = dist.values();
    const auto &cdf = dist.cdf();
    const double nn = static_cast<double>(n);
    ExtremeValues out;
    double below = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double f = cdf[k];
        out.sn += v[k] * (std::pow(f, nn) - std::pow(below, nn));
        out.s1 += v[k] * (std::pow(1.0 - below, nn) - std::pow(1.0 - f, nn));
        below = f;
    }
    return out;
}

double objective_statistic(const CostSample &s, Statistic statistic) {
    switch (statistic) {
    case Statistic::max:
        return best_statistic(s);
    case Statistic::mean:
        return mean_statistic(s);
    case Statistic::expected_max:
        return extreme_value_expectations(DiscreteDistribution::empirical(s.values), s.values.size()).sn;
    }
    throw std::invalid_argument("unknown statistic");
}

} // namespace qcluster
