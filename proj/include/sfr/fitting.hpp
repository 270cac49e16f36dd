#pragma once

#include "sfr/baselines.hpp"
#include "sfr/bootstrap.hpp"
#include "sfr/dataset.hpp"
#include "sfr/scoring.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sfr {

/// Score-to-weight transform g. Both map [0, 1] onto [0, 1] monotonically
/// with g(0) = 0 and g(1) = 1.
enum class WeightScheme {
    Squared,   ///< g(psi) = psi^2
    Identity,  ///< g(psi) = psi
};

[[nodiscard]] double reliability_weight(WeightScheme scheme, double score) noexcept;
[[nodiscard]] Eigen::VectorXd reliability_weights(const Eigen::VectorXd& scores, WeightScheme scheme);

enum class EstimatorKind { Ols, Huber, Ransac, Sfr };

/// Upper-case display name ("OLS", "HUBER", "RANSAC", "SFR").
[[nodiscard]] std::string_view estimator_name(EstimatorKind kind) noexcept;
/// Case-insensitive; throws Error(InvalidArgument) for unknown names.
[[nodiscard]] EstimatorKind parse_estimator(std::string_view name);

/// Settings shared by every estimator in a comparison. `seed` drives all
/// randomness: the point estimate uses it directly and bootstrap replicates
/// use streams derived from it.
struct FitConfig {
    ScoringConfig scoring;
    WeightScheme scheme = WeightScheme::Squared;
    HuberConfig huber;
    RansacConfig ransac;
    std::size_t bootstrap_b = 1000;
    std::uint64_t seed = 42;
    std::size_t threads = 0;
    CiMethod ci = CiMethod::Normal;
};

/// Two-step reliability-weighted estimate: score the data once, then WLS
/// with weights g(score).
[[nodiscard]] Eigen::VectorXd sfr_coefficients(const Dataset& data, const ScoringConfig& scoring,
                                               WeightScheme scheme);

/// Coefficient vector of one estimator as a bootstrap-ready closure. The
/// closure runs single-threaded; parallelism comes from the bootstrap.
[[nodiscard]] Estimator make_estimator(EstimatorKind kind, const FitConfig& config);

struct FitRow {
    std::string estimator;
    std::string coefficient;
    double coef = 0.0;
    double std_err = 0.0;
    double t = 0.0;
    double p = 0.0;  ///< two-sided normal tail probability of |t|
    double ci_lower = 0.0;
    double ci_upper = 0.0;
    std::size_t b_effective = 0;
    bool inference_available = true;
    std::string note;  ///< failure reason when inference (or the estimate) is unavailable
};

struct FitTable {
    std::vector<FitRow> rows;
};

/// Reliability-weighted fit with two-step pairs-bootstrap inference: every
/// replicate re-scores, re-weights and re-fits. Errors propagate.
[[nodiscard]] FitTable fit_sfr(const Dataset& data, const FitConfig& config);

/// One row per estimator per coefficient, all with bootstrap inference.
/// Failures are reported in-row instead of aborting the table.
[[nodiscard]] FitTable fit_table_compare(const Dataset& data, const std::vector<EstimatorKind>& estimators,
                                         const FitConfig& config);

/// Columns: estimator, coefficient, coef, std_err, t, p_value, ci_lower,
/// ci_upper, b_effective, note.
void write_fit_csv(std::ostream& out, const FitTable& table);
/// Aligned text table with "Coef. Std.Err. t P>|t| [0.025 0.975]" columns.
void write_fit_text(std::ostream& out, const FitTable& table);

}  // namespace sfr
