#pragma once

#include "sfr/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace sfr {

/// z-quantile behind the 95% normal-approximation interval.
inline constexpr double kNormalQuantile975 = 1.96;

enum class CiMethod {
    Normal,      ///< estimate +/- 1.96 * bootstrap SE
    Percentile,  ///< 2.5% / 97.5% quantiles of the replicate estimates
};

/// An estimator maps a dataset to a coefficient vector. The seed argument is
/// the estimator's own stream for any internal randomness; deterministic
/// estimators ignore it.
using Estimator = std::function<Eigen::VectorXd(const Dataset&, std::uint64_t seed)>;

struct BootstrapOptions {
    std::size_t replications = 1000;
    std::uint64_t seed = 42;
    std::size_t threads = 0;  ///< 0 = all hardware threads
    CiMethod ci = CiMethod::Normal;
};

struct BootstrapResult {
    Eigen::MatrixXd replicate_estimates;  ///< b_effective x k, ordered by replicate index
    Eigen::VectorXd point_estimate;
    Eigen::VectorXd standard_errors;
    Eigen::VectorXd ci_lower;
    Eigen::VectorXd ci_upper;
    std::size_t b_effective = 0;
};

/// Seed handed to the estimator for the point estimate on the original data.
[[nodiscard]] std::uint64_t point_estimate_seed(std::uint64_t seed) noexcept;

/// Non-parametric pairs bootstrap: every replicate resamples N rows of
/// (y, X) jointly with replacement and re-runs the estimator. Replicate r
/// uses streams derived from (seed, r) only, so results do not depend on the
/// worker count. Replicates whose estimator fails on a degenerate resample
/// (rank deficiency and friends) are dropped.
///
/// Throws Error(InvalidArgument) when replications < 2 and
/// Error(TooManyFailures) when fewer than half the replicates succeed.
[[nodiscard]] BootstrapResult pairs_bootstrap(const Dataset& data, const Estimator& estimator,
                                              const BootstrapOptions& options);

/// Column-wise summary of replicate draws around a given point estimate.
/// Shared by the bootstrap engine and the annealing bands.
void summarize_replicates(const Eigen::MatrixXd& draws, const Eigen::VectorXd& point, CiMethod ci,
                          Eigen::VectorXd& standard_errors, Eigen::VectorXd& lower, Eigen::VectorXd& upper);

}  // namespace sfr
