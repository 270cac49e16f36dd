#pragma once

#include "sfr/bootstrap.hpp"
#include "sfr/dataset.hpp"
#include "sfr/scoring.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sfr {

struct AnnealingConfig {
    /// Fraction of the sample to remove, in (0, 1].
    double share = 0.10;
    /// Evaluation points including the unannealed step; 0 selects every drop
    /// count up to 201 points.
    std::size_t n_steps = 0;
    std::size_t bootstrap_b = 1000;
    std::uint64_t seed = 42;
    /// Tracked coefficient; unset selects the first feature coefficient.
    std::optional<std::size_t> target_coefficient;
    /// Scoring iterations inside bootstrap replicates; 0 reuses the
    /// original run's count. Smaller values approximate the two-step band
    /// at lower cost for large N.
    std::size_t bootstrap_scoring_iterations = 0;
    CiMethod ci = CiMethod::Normal;
    std::size_t threads = 0;
};

struct AnnealingStep {
    std::size_t n_dropped = 0;
    double share_dropped = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;  ///< NaN without bootstrap
    double ci_lower = 0.0;   ///< NaN without bootstrap
    double ci_upper = 0.0;   ///< NaN without bootstrap
};

struct AnnealingPath {
    std::vector<AnnealingStep> steps;
    /// Rows in removal order (ascending score, ties by row index), as deep as
    /// the last step.
    std::vector<std::size_t> dropped_order;
    std::size_t target_coefficient = 0;
    std::size_t b_effective = 0;
};

/// Removal order for a score vector: ascending score, ties by row index.
[[nodiscard]] std::vector<std::size_t> removal_order(const Eigen::VectorXd& scores);

/// Drop counts visited by the path: evenly spaced from 0 to ceil(share * N)
/// inclusive. Throws Error(InvalidArgument) when the share is outside
/// (0, 1] or would leave fewer than k + 1 rows.
[[nodiscard]] std::vector<std::size_t> annealing_grid(std::size_t n, std::size_t k, const AnnealingConfig& config);

/// Re-fits OLS while removing the lowest-score rows, using the given scores
/// as-is. Confidence columns are NaN. Throws Error(RankDeficient) naming the
/// failing step.
[[nodiscard]] AnnealingPath anneal(const Dataset& data, const Eigen::VectorXd& scores, const AnnealingConfig& config);

/// Point path from the original data plus pointwise bootstrap bands. Every
/// replicate resamples rows, re-scores the resample and anneals by its own
/// scores. Throws Error(TooManyFailures) when fewer than half the replicates
/// succeed.
[[nodiscard]] AnnealingPath anneal_with_bootstrap(const Dataset& data, const ScoringConfig& scoring,
                                                  const AnnealingConfig& config);

struct BalanceRow {
    std::string feature;
    double mean_dropped = 0.0;
    double mean_kept = 0.0;
    double standardized_difference = 0.0;  ///< NaN when both groups are constant
};

/// Standardized mean differences per feature between the rows removed at the
/// deepest step and the rows kept.
[[nodiscard]] std::vector<BalanceRow> covariate_balance(const Dataset& data, const AnnealingPath& path);

/// Columns: n_dropped, share, estimate, ci_lower, ci_upper, std_error.
void write_path_csv(std::ostream& out, const AnnealingPath& path);

}  // namespace sfr
