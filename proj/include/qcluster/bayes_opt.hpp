#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcluster {

struct KernelParams {
    double variance = 1.0;    ///< sigma_f^2
    double lengthscale = 1.0; ///< l
    /// Measure distance on the torus [0, 2pi)^d (per-axis chord 2 sin(d/2))
    /// instead of plain Euclidean distance.
    bool periodic = false;
};

/// Matern nu = 5/2: s^2 (1 + sqrt5 r/l + 5 r^2 / (3 l^2)) exp(-sqrt5 r/l).
double matern25(std::span<const double> a, std::span<const double> b, const KernelParams &kernel);

/// Matern-2.5 as a function of the distance only.
double matern25_of_distance(double r, const KernelParams &kernel);

double kernel_distance(std::span<const double> a, std::span<const double> b, bool periodic);

struct Posterior {
    double mean = 0.0;
    double sigma = 0.0;
};

/// Gaussian-process regression model over a d-dimensional box.
///
/// The Gram matrix K + noise_variance I is factorised by Cholesky after
/// every added observation. If the factorisation fails a jitter of
/// 1e-8 * sigma_f^2 is added to the diagonal and the factorisation retried;
/// a second failure raises NumericError.
class GpModel {
public:
    GpModel(std::size_t dimension, KernelParams kernel, double noise_variance, double prior_mean = 0.0);

    std::size_t dimension() const { return dimension_; }
    const KernelParams &kernel() const { return kernel_; }
    double noise_variance() const { return noise_variance_; }
    double prior_mean() const { return prior_mean_; }
    std::size_t size() const { return ys_.size(); }
    const std::vector<std::vector<double>> &inputs() const { return thetas_; }
    const std::vector<double> &targets() const { return ys_; }
    bool jittered() const { return jittered_; }

    void add_observation(std::span<const double> theta, double y);

    Posterior posterior(std::span<const double> theta) const;

private:
    void refactor();

    std::size_t dimension_;
    KernelParams kernel_;
    double noise_variance_;
    double prior_mean_;
    std::vector<std::vector<double>> thetas_;
    std::vector<double> ys_;
    Eigen::MatrixXd chol_lower_;
    Eigen::VectorXd alpha_;
    bool jittered_ = false;
};

struct AcquisitionConfig {
    double kappa = 2.576; ///< explore/exploit weight beta_m
    std::size_t candidate_count = 1000;
    std::size_t refinement_steps = 20;
    double lower = 0.0;
    double upper = 6.283185307179586;
};

/// mu + kappa * sigma
double ucb(const GpModel &model, std::span<const double> theta, const AcquisitionConfig &config);

/// Maximises ucb over the box: `candidate_count` uniform candidates, then a
/// coordinate-wise local search from the best one with step halving. Ties
/// keep the first maximum. Deterministic given `seed`.
std::vector<double> propose_next(const GpModel &model, const AcquisitionConfig &config, std::uint64_t seed);

struct OptimizerConfig {
    KernelParams kernel;
    double noise_variance = 0.01;
    double prior_mean = 0.0;
    AcquisitionConfig acquisition;
    std::size_t budget = 55;
    /// Stop as soon as an observation reaches this value (known optimum).
    std::optional<double> target;
    double target_tolerance = 1e-9;
};

struct OptimizationStep {
    std::vector<double> theta;
    double value = 0.0;
    double historic_best = 0.0;
};

struct OptimizationTrace {
    std::vector<OptimizationStep> steps;
    bool reached_target = false;
    /// Set when the objective threw; `steps` holds everything before it.
    std::optional<std::string> error;

    double best_value() const;
    const std::vector<double> &best_theta() const;
};

using Objective = std::function<double(std::span<const double>)>;

/// Queried after every evaluation; returning true ends the run early.
using StopRule = std::function<bool(const OptimizationStep &)>;

/// Sequential GP-UCB: propose, evaluate, record the historic best, condition.
/// Stops at the budget, when an observation reaches config.target, or when
/// `stop` says so.
OptimizationTrace optimize(const Objective &objective, std::size_t dimension, const OptimizerConfig &config,
                           std::uint64_t seed, const StopRule &stop = {});

} // namespace qcluster
