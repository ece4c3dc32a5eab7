#include "qcluster/bayes_opt.hpp"

#include "qcluster/errors.hpp"
#include "qcluster/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcluster {

double kernel_distance(std::span<const double> a, std::span<const double> b, bool periodic) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("kernel inputs differ in dimension");
    }
    double sq = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = periodic ? 2.0 * std::sin(0.5 * (a[k] - b[k])) : a[k] - b[k];
        sq += d * d;
    }
    return std::sqrt(sq);
}

double matern25_of_distance(double r, const KernelParams &kernel) {
    const double s = std::sqrt(5.0) * r / kernel.lengthscale;
    return kernel.variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double matern25(std::span<const double> a, std::span<const double> b, const KernelParams &kernel) {
    return matern25_of_distance(kernel_distance(a, b, kernel.periodic), kernel);
}

GpModel::GpModel(std::size_t dimension, KernelParams kernel, double noise_variance, double prior_mean)
    : dimension_(dimension), kernel_(kernel), noise_variance_(noise_variance), prior_mean_(prior_mean) {
    if (dimension == 0) {
        throw std::invalid_argument("GP dimension must be positive");
    }
    if (!(kernel.variance > 0.0) || !(kernel.lengthscale > 0.0)) {
        throw std::invalid_argument("kernel variance and lengthscale must be positive");
    }
    if (!(noise_variance >= 0.0)) {
        throw std::invalid_argument("observation noise variance must be non-negative");
    }
}

void GpModel::add_observation(std::span<const double> theta, double y) {
    if (theta.size() != dimension_) {
        throw std::invalid_argument("observation has the wrong dimension");
    }
    if (!std::isfinite(y)) {
        throw std::invalid_argument("observation value must be finite");
    }
    thetas_.emplace_back(theta.begin(), theta.end());
    ys_.push_back(y);
    try {
        refactor();
    } catch (...) {
        thetas_.pop_back();
        ys_.pop_back();
        refactor();
        throw;
    }
}

void GpModel::refactor() {
    const auto m = static_cast<Eigen::Index>(ys_.size());
    jittered_ = false;
    if (m == 0) {
        chol_lower_.resize(0, 0);
        alpha_.resize(0);
        return;
    }
    Eigen::MatrixXd gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            gram(i, j) = gram(j, i) = matern25(thetas_[i], thetas_[j], kernel_);
        }
        gram(i, i) += noise_variance_;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        gram.diagonal().array() += 1e-8 * kernel_.variance;
        llt.compute(gram);
        jittered_ = true;
        if (llt.info() != Eigen::Success) {
            throw NumericError("Gram matrix is not positive definite; duplicate noiseless observations?");
        }
    }
    chol_lower_ = llt.matrixL();
    Eigen::VectorXd centred(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        centred(i) = ys_[i] - prior_mean_;
    }
    alpha_ = llt.solve(centred);
}

Posterior GpModel::posterior(std::span<const double> theta) const {
    if (theta.size() != dimension_) {
        throw std::invalid_argument("query has the wrong dimension");
    }
    const auto m = static_cast<Eigen::Index>(ys_.size());
    if (m == 0) {
        return {prior_mean_, std::sqrt(kernel_.variance)};
    }
    Eigen::VectorXd k_star(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        k_star(i) = matern25(thetas_[i], theta, kernel_);
    }
    const double mean = prior_mean_ + k_star.dot(alpha_);
    const Eigen::VectorXd v = chol_lower_.triangularView<Eigen::Lower>().solve(k_star);
    const double variance = std::max(0.0, kernel_.variance - v.squaredNorm());
    return {mean, std::sqrt(variance)};
}

double ucb(const GpModel &model, std::span<const double> theta, const AcquisitionConfig &config) {
    const Posterior post = model.posterior(theta);
    return post.mean + config.kappa * post.sigma;
}

std::vector<double> propose_next(const GpModel &model, const AcquisitionConfig &config, std::uint64_t seed) {
    if (config.candidate_count == 0) {
        throw std::invalid_argument("candidate_count must be at least 1");
    }
    if (!(config.upper > config.lower)) {
        throw std::invalid_argument("empty search box");
    }
    const std::size_t d = model.dimension();
    Rng rng(seed);
    std::vector<double> best(d);
    std::vector<double> candidate(d);
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < config.candidate_count; ++c) {
        for (double &x : candidate) {
            x = rng.uniform(config.lower, config.upper);
        }
        const double value = ucb(model, candidate, config);
        if (value > best_value) {
            best_value = value;
            best = candidate;
        }
    }

    // Coordinate search; the box is half-open so stay strictly below `upper`.
    const double top = std::nextafter(config.upper, config.lower);
    double step = (config.upper - config.lower) / 32.0;
    std::vector<double> trial(d);
    for (std::size_t it = 0; it < config.refinement_steps; ++it) {
        bool improved = false;
        for (std::size_t k = 0; k < d; ++k) {
            for (double direction : {1.0, -1.0}) {
                trial = best;
                trial[k] = std::clamp(best[k] + direction * step, config.lower, top);
                const double value = ucb(model, trial, config);
                if (value > best_value) {
                    best_value = value;
                    best = trial;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step *= 0.5;
        }
    }
    return best;
}

double OptimizationTrace::best_value() const {
    if (steps.empty()) {
        throw std::logic_error("empty optimization trace");
    }
    return steps.back().historic_best;
}

const std::vector<double> &OptimizationTrace::best_theta() const {
    if (steps.empty()) {
        throw std::logic_error("empty optimization trace");
    }
    auto it = std::max_element(steps.begin(), steps.end(),
                               [](const OptimizationStep &a, const OptimizationStep &b) { return a.value < b.value; });
    return it->theta;
}

OptimizationTrace optimize(const Objective &objective, std::size_t dimension, const OptimizerConfig &config,
                           std::uint64_t seed, const StopRule &stop) {
    if (config.budget == 0) {
        throw std::invalid_argument("optimizer budget must be at least 1");
    }
    GpModel model(dimension, config.kernel, config.noise_variance, config.prior_mean);
    OptimizationTrace trace;
    double historic_best = -std::numeric_limits<double>::infinity();
    for (std::size_t step = 0; step < config.budget; ++step) {
        std::vector<double> theta = propose_next(model, config.acquisition, derive_seed(seed, step));
        double value = 0.0;
        try {
            value = objective(theta);
        } catch (const std::exception &e) {
            trace.error = e.what();
            return trace;
        }
        historic_best = std::max(historic_best, value);
        trace.steps.push_back({theta, value, historic_best});
        if (config.target && value >= *config.target - config.target_tolerance * std::max(1.0, std::abs(*config.target))) {
            trace.reached_target = true;
            return trace;
        }
        if (stop && stop(trace.steps.back())) {
            return trace;
        }
        model.add_observation(theta, value);
    }
    return trace;
}

} // namespace qcluster
