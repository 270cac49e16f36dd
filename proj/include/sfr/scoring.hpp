#pragma once

#include "sfr/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sfr {

enum class Loss { Absolute, Squared };

/// How accumulated out-of-bag losses are averaged.
enum class OobAveraging {
    PerObservation,  ///< divide by each observation's own out-of-bag count
    Iterations,      ///< divide every observation by the effective iteration count
};

struct ScoringConfig {
    std::size_t iterations = 1000;
    /// Rows per minimal sub-sample; 0 selects k + 1 (k = fitted coefficients).
    std::size_t subsample_size = 0;
    Loss loss = Loss::Absolute;
    std::uint64_t seed = 42;
    std::size_t max_redraws_per_iteration = 100;
    OobAveraging averaging = OobAveraging::PerObservation;
    std::size_t threads = 0;  ///< 0 = all hardware threads
};

struct ReliabilityScores {
    Eigen::VectorXd expected_losses;  ///< average out-of-bag loss per row
    Eigen::VectorXd scores;           ///< reverse min-max transform of expected_losses, in [0, 1]
    std::vector<std::size_t> oob_counts;
    std::size_t effective_iterations = 0;
};

/// Sub-sample size actually used for `data` under `config`.
[[nodiscard]] std::size_t resolved_subsample_size(const Dataset& data, const ScoringConfig& config);

/// Reverse min-max transform: the largest loss maps to 0 and the smallest to
/// 1. When the losses span no more than `tolerance` all scores are 1.
/// score_sample passes 1e-12 * (1 + max|y|) so exact fits are not ranked by
/// rounding noise.
[[nodiscard]] Eigen::VectorXd reliability_from_losses(const Eigen::VectorXd& expected_losses,
                                                      double tolerance = 0.0);

/// Repeatedly fits OLS on random minimal sub-samples drawn without
/// replacement and averages each row's loss over the iterations in which it
/// was out-of-bag.
///
/// Iteration s draws from its own stream derived from (seed, s). A
/// rank-deficient draw is redrawn up to max_redraws_per_iteration times and
/// the iteration is skipped after that. Output is bit-identical for any
/// thread count.
///
/// Throws Error(InvalidArgument) for an invalid config, Error(NeverOutOfBag)
/// when some row was never evaluated and Error(AllIterationsDegenerate) when
/// no iteration produced a fit.
[[nodiscard]] ReliabilityScores score_sample(const Dataset& data, const ScoringConfig& config);

/// Same semantics as score_sample, but visits every size-eta subset exactly
/// once, giving the exact expectation over the re-sampling measure. Subsets
/// that are rank deficient are skipped. Throws Error(TooManySubsamples) when
/// C(N, eta) exceeds kMaxExhaustiveSubsets.
[[nodiscard]] ReliabilityScores score_sample_exhaustive(const Dataset& data, const ScoringConfig& config);

inline constexpr std::size_t kMaxExhaustiveSubsets = 1'000'000;

/// Columns: row_index, expected_loss, score, oob_count.
void write_scores_csv(std::ostream& out, const ReliabilityScores& scores);

}  // namespace sfr
