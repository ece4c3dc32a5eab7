#include "qcluster/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcluster {

double random_sampling_cdf(double p_success, std::size_t n_shots, std::size_t k_steps) {
    if (!(p_success >= 0.0 && p_success <= 1.0)) {
        throw std::invalid_argument("success probability must lie in [0, 1]");
    }
    if (k_steps == 0 || n_shots == 0) {
        return 0.0;
    }
    if (p_success == 1.0) {
        return 1.0;
    }
    const double draws = static_cast<double>(k_steps) * static_cast<double>(n_shots);
    return -std::expm1(draws * std::log1p(-p_success));
}

double random_success_probability(std::size_t optimal_count, std::size_t n_qubits) {
    return static_cast<double>(optimal_count) * std::ldexp(1.0, -static_cast<int>(n_qubits));
}

EcdfCurve::EcdfCurve(std::vector<double> samples) : total_(samples.size()) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical CDF of an empty sample");
    }
    for (double s : samples) {
        if (std::isnan(s)) {
            throw std::invalid_argument("empirical CDF sample is NaN");
        }
        if (std::isfinite(s)) {
            finite_.push_back(s);
        }
    }
    std::sort(finite_.begin(), finite_.end());
}

double EcdfCurve::operator()(double x) const {
    const auto count = std::upper_bound(finite_.begin(), finite_.end(), x) - finite_.begin();
    return static_cast<double>(count) / static_cast<double>(total_);
}

double EcdfCurve::plateau() const { return static_cast<double>(finite_.size()) / static_cast<double>(total_); }

EcdfCurve empirical_cdf(std::vector<double> samples) { return EcdfCurve(std::move(samples)); }

double ks_statistic(const EcdfCurve &f1, const EcdfCurve &f2) {
    // Both are step functions, so the supremum is attained at a jump point
    // (or on the plateau beyond the last one).
    double sup = std::abs(f1.plateau() - f2.plateau());
    for (const EcdfCurve *f : {&f1, &f2}) {
        for (double x : f->jumps()) {
            sup = std::max(sup, std::abs(f1(x) - f2(x)));
        }
    }
    return sup;
}

double ks_statistic(std::span<const double> f1, std::span<const double> f2) {
    if (f1.size() != f2.size()) {
        throw std::invalid_argument("CDFs must be tabulated on the same step domain");
    }
    double sup = 0.0;
    for (std::size_t k = 0; k < f1.size(); ++k) {
        sup = std::max(sup, std::abs(f1[k] - f2[k]));
    }
    return sup;
}

std::vector<double> tabulate(const EcdfCurve &f, std::size_t max_step) {
    std::vector<double> out(max_step + 1);
    for (std::size_t k = 0; k <= max_step; ++k) {
        out[k] = f(static_cast<double>(k));
    }
    return out;
}

std::vector<double> tabulate_random_sampling(double p_success, std::size_t n_shots, std::size_t max_step) {
    std::vector<double> out(max_step + 1);
    for (std::size_t k = 0; k <= max_step; ++k) {
        out[k] = random_sampling_cdf(p_success, n_shots, k);
    }
    return out;
}

double ks_significance(double ks, std::size_t n, std::size_t m) {
    if (ks < 0.0 || n == 0 || m == 0) {
        throw std::invalid_argument("ks_significance needs ks >= 0 and n, m >= 1");
    }
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return 2.0 * std::exp(-2.0 * ks * ks * nn * mm / (nn + mm));
}

double ks_from_significance(double alpha, std::size_t n, std::size_t m) {
    if (!(alpha > 0.0) || alpha > 2.0 || n == 0 || m == 0) {
        throw std::invalid_argument("ks_from_significance needs 0 < alpha <= 2 and n, m >= 1");
    }
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return std::sqrt(-0.5 * std::log(alpha / 2.0) * (nn + mm) / (nn * mm));
}

} // namespace qcluster
