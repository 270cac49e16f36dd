#pragma once

#include "sfr/dataset.hpp"
#include "sfr/linear_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace sfr {

// ---------------------------------------------------------------------------
// Huber M-estimation by iteratively reweighted least squares.

enum class HuberScale {
    Mad,    ///< re-estimated each iteration as median(|r|) / 0.6745
    Fixed,  ///< HuberConfig::fixed_scale throughout
};

struct HuberConfig {
    double tuning_constant = 1.345;
    std::size_t max_iterations = 100;
    double tolerance = 1e-8;  ///< on the largest absolute coefficient change
    HuberScale scale = HuberScale::Mad;
    double fixed_scale = 1.0;
};

struct HuberFit {
    LinearFit fit;
    std::size_t iterations = 0;
    bool converged = false;
    double scale = 0.0;  ///< scale used in the final reweighting step
    /// Huber objective sum_i rho(r_i / scale) after the initial OLS fit and
    /// after every reweighting step, each evaluated at that step's scale.
    std::vector<double> objective_trace;
};

/// Starts from OLS and reweights with w(r) = min(1, c * scale / |r|) until
/// the coefficients stop moving. Returns the last iterate with
/// converged = false when max_iterations is reached. A zero scale (perfect
/// fit) keeps every weight at 1. Throws Error(InvalidArgument) for a
/// non-positive tuning constant or tolerance, and Error(RankDeficient).
[[nodiscard]] HuberFit fit_huber(const Dataset& data, const HuberConfig& config = {});

/// Huber loss rho(u) = u^2 / 2 for |u| <= c, c |u| - c^2 / 2 otherwise.
[[nodiscard]] double huber_rho(double u, double c) noexcept;

// ---------------------------------------------------------------------------
// RANSAC.

struct RansacConfig {
    /// Rows per trial; 0 selects k.
    std::size_t min_sample_size = 0;
    /// Inlier threshold on |residual|; unset selects the median absolute
    /// deviation of the full-sample OLS residuals.
    std::optional<double> residual_threshold;
    std::size_t max_trials = 100;
    /// Stop once a trial reaches this inlier fraction; 1.0 runs every trial.
    double stop_inlier_fraction = 1.0;
    std::uint64_t seed = 42;
    std::size_t max_redraws_per_trial = 100;
    std::size_t threads = 1;
};

struct RansacFit {
    LinearFit fit;                       ///< OLS refit on the consensus set, evaluated on every row
    std::vector<bool> inlier_mask;       ///< |y - X b_trial| <= threshold under the winning trial model
    Eigen::VectorXd trial_coefficients;  ///< winning trial model (before the refit)
    double threshold = 0.0;
    std::size_t best_trial = 0;
    std::size_t inlier_count = 0;
    std::size_t trials_run = 0;
};

/// Fits random minimal sub-samples, keeps the trial with the most inliers
/// (ties go to the lowest trial index) and refits OLS on its consensus set.
/// Trial t draws from a stream derived from (seed, t). Throws
/// Error(NoConsensus) when the best trial has fewer than k + 1 inliers.
[[nodiscard]] RansacFit fit_ransac(const Dataset& data, const RansacConfig& config = {});

/// Median absolute deviation around the median (unscaled).
[[nodiscard]] double median_absolute_deviation(const Eigen::VectorXd& values);

}  // namespace sfr
