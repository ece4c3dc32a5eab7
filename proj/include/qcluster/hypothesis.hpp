#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qcluster {

/// Probability that uniform random sampling has drawn an optimal string
/// after `k_steps` steps of `n_shots` shots: 1 - (1 - p)^(k N).
double random_sampling_cdf(double p_success, std::size_t n_shots, std::size_t k_steps);

/// Fraction of the 2^n strings that are optimal.
double random_success_probability(std::size_t optimal_count, std::size_t n_qubits);

/// Right-continuous empirical CDF of time-to-optimum samples. Censored runs
/// (never reached the optimum) are passed as +infinity: they count in the
/// denominator only, so the curve can plateau below 1.
class EcdfCurve {
public:
    EcdfCurve() = default;
    /// Throws invalid_argument on an empty sample or NaN.
    explicit EcdfCurve(std::vector<double> samples);

    double operator()(double x) const;
    std::size_t sample_count() const { return total_; }
    /// Sorted finite samples (the jump points, with multiplicity).
    const std::vector<double> &jumps() const { return finite_; }
    double plateau() const;

private:
    std::vector<double> finite_;
    std::size_t total_ = 0;
};

EcdfCurve empirical_cdf(std::vector<double> samples);

/// sup_x |F1(x) - F2(x)| over the union of jump points.
double ks_statistic(const EcdfCurve &f1, const EcdfCurve &f2);

/// Same for two CDFs tabulated on a common integer step domain 0..K.
double ks_statistic(std::span<const double> f1, std::span<const double> f2);

/// ECDF tabulated at steps 0..max_step.
std::vector<double> tabulate(const EcdfCurve &f, std::size_t max_step);

/// Random-sampling CDF tabulated at steps 0..max_step.
std::vector<double> tabulate_random_sampling(double p_success, std::size_t n_shots, std::size_t max_step);

/// Inverts KS >= c(alpha) sqrt((n+m)/(nm)) with c(alpha) = sqrt(-log(alpha/2)/2):
/// alpha = 2 exp(-2 ks^2 nm/(n+m)). Not clamped, so ks = 0 gives 2.
double ks_significance(double ks, std::size_t n, std::size_t m);

/// Inverse of ks_significance.
double ks_from_significance(double alpha, std::size_t n, std::size_t m);

} // namespace qcluster
