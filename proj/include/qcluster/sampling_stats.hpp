#pragma once

#include "qcluster/graph.hpp"
#include "qcluster/statevector.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qcluster {

/// Cut costs of the shots taken at one parameter point.
struct CostSample {
    std::vector<double> values;
    BitString best_bitstring;
};

/// Prepares the QAOA state, samples `n_shots` bit strings and maps each through cut_cost.
CostSample evaluate_distribution(const WeightedGraph &g, const QaoaAngles &angles, std::size_t n_shots,
                                 std::uint64_t seed, const std::optional<NoiseModel> &noise = std::nullopt);

/// Same, reusing a simulator's cached cost table.
CostSample evaluate_distribution(const QaoaSimulator &sim, const QaoaAngles &angles, std::size_t n_shots,
                                 std::uint64_t seed, const std::optional<NoiseModel> &noise = std::nullopt);

/// Largest sampled cost: the realised N-th order statistic.
double best_statistic(const CostSample &s);
double mean_statistic(const CostSample &s);

/// Finite distribution over real values. Atoms are kept sorted and unique.
class DiscreteDistribution {
public:
    /// Throws invalid_argument if sizes differ, a probability is negative, or
    /// the total is not 1 within 1e-9. Repeated values are merged.
    DiscreteDistribution(std::vector<double> values, std::vector<double> probabilities);

    /// Empirical distribution of a sample (each draw weight 1/N).
    static DiscreteDistribution empirical(std::span<const double> sample);

    const std::vector<double> &values() const { return values_; }
    const std::vector<double> &probabilities() const { return probabilities_; }
    /// cdf()[k] = P(X <= values()[k])
    const std::vector<double> &cdf() const { return cdf_; }

    double mean() const;
    std::size_t size() const { return values_.size(); }

private:
    std::vector<double> values_;
    std::vector<double> probabilities_;
    std::vector<double> cdf_;
};

/// Distribution of the j-th smallest of `n` i.i.d. draws (1 <= j <= n), from
/// P(X_(j) <= v) = P(Binomial(n, F(v)) >= j), differenced over the atoms.
/// Throws invalid_argument if j is out of range.
DiscreteDistribution order_statistic_pdf(const DiscreteDistribution &dist, std::size_t j, std::size_t n);

struct ExtremeValues {
    double s1 = 0.0; ///< E[min of n draws]
    double sn = 0.0; ///< E[max of n draws]
};

ExtremeValues extreme_value_expectations(const DiscreteDistribution &dist, std::size_t n);

/// Scalar handed to the optimizer for each sampled distribution.
enum class Statistic {
    max,          ///< best sampled cost
    mean,         ///< sample mean
    expected_max, ///< s_N of the empirical distribution with N = shot count
};

double objective_statistic(const CostSample &s, Statistic statistic);

} // namespace qcluster
