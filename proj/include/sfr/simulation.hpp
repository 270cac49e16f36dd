#pragma once

#include "sfr/dataset.hpp"
#include "sfr/fitting.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sfr {

/// How the second parameter of N(mean, .) in the scenario definitions is read.
enum class VarianceConvention { Variance, StdDev };

/// Monte Carlo design. Scenarios:
///   1  clean: x ~ N(0, 1), y = x + e, e ~ N(0, 2/3)
///   2  random outliers: x ~ N(0, 2), y ~ N(0, 2)
///   3  one leverage cluster: x ~ N(2, 1/2), y ~ N(-1, 2/3)
///   4  two leverage clusters: scenario 3's plus x ~ N(-2, 1/2), y ~ N(1, 2/3)
/// Outlier rows replace clean rows so every sample has exactly n rows.
struct ScenarioConfig {
    int scenario = 1;
    std::size_t n = 1000;
    double outlier_share = 0.05;  ///< ignored (treated as 0) for scenario 1
    std::size_t replications = 200;
    std::uint64_t seed = 42;
    VarianceConvention variance_convention = VarianceConvention::Variance;
    bool add_intercept = false;
    std::size_t threads = 0;
};

inline constexpr double kTrueSlope = 1.0;

/// round-half-up(share * n), or 0 for scenario 1.
[[nodiscard]] std::size_t outlier_count(const ScenarioConfig& config);

struct ScenarioSample {
    Dataset data;
    /// Outlier membership: 0 clean, 1 first cluster, 2 second cluster.
    std::vector<int> outlier_group;
};

/// Clean rows come first, outliers last. Deterministic per
/// (seed, replication); replications draw from disjoint streams.
[[nodiscard]] ScenarioSample generate_scenario_sample(const ScenarioConfig& config, std::size_t replication);
[[nodiscard]] Dataset generate_scenario(const ScenarioConfig& config, std::size_t replication);

/// Maps a sample to a slope estimate. The seed is the estimator's own stream.
struct NamedEstimator {
    std::string name;
    std::function<double(const Dataset&, std::uint64_t seed)> slope;
};

/// Wraps a library estimator; the slope is the first feature coefficient.
[[nodiscard]] NamedEstimator standard_estimator(EstimatorKind kind, const FitConfig& config);

struct JarqueBera {
    double statistic = 0.0;
    double p_value = 1.0;  ///< upper tail of chi-square(2)
};

/// JB = n/6 (skew^2 + excess_kurtosis^2 / 4) from biased sample moments.
/// A sample with zero variance yields statistic 0 and p-value 1. Throws
/// Error(TooFewSamples) below 8 values.
[[nodiscard]] JarqueBera jarque_bera(std::span<const double> samples);

struct EstimatorMetrics {
    std::string name;
    std::vector<double> estimates;  ///< successful replications in index order
    std::vector<std::size_t> replications;  ///< replication index of each estimate
    std::size_t failures = 0;
    double mse = 0.0;
    double mean_abs_bias = 0.0;
    double std_dev = 0.0;
    double jarque_bera_statistic = 0.0;
    double jarque_bera_p = 1.0;
};

struct MetricsTable {
    ScenarioConfig config;
    std::vector<EstimatorMetrics> rows;
};

/// Runs every estimator on every replication. Estimator failures on
/// degenerate samples are counted and excluded. Throws Error(InvalidArgument)
/// for fewer than 10 replications.
[[nodiscard]] MetricsTable run_benchmark(const ScenarioConfig& config, const std::vector<NamedEstimator>& estimators);

/// Columns: scenario, n, outlier_share, estimator, replications_ok, failures,
/// mse, mean_abs_bias, std_dev, jarque_bera_stat, jarque_bera_p.
void write_metrics_csv(std::ostream& out, const MetricsTable& table);
/// Metric blocks (MSE, mean absolute bias, SD, JB p-value) with one row per
/// estimator.
void write_metrics_text(std::ostream& out, const MetricsTable& table);
/// Long format: replication, estimator, estimate.
void write_draws_csv(std::ostream& out, const MetricsTable& table);

}  // namespace sfr
