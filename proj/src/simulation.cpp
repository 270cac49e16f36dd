#include "sfr/simulation.hpp"

#include "sfr/data_io.hpp"
#include "sfr/error.hpp"
#include "sfr/parallel.hpp"
#include "sfr/random.hpp"
#include "sfr/stats.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>

namespace sfr {
namespace {

void validate(const ScenarioConfig& config) {
    if (config.scenario < 1 || config.scenario > 4) {
        throw Error(ErrorCode::InvalidArgument, "scenario must be 1, 2, 3 or 4");
    }
    if (!(config.outlier_share >= 0.0 && config.outlier_share < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "outlier share must lie in [0, 1)");
    }
}

}  // namespace

std::size_t outlier_count(const ScenarioConfig& config) {
    validate(config);
    if (config.scenario == 1) return 0;
    return static_cast<std::size_t>(std::floor(config.outlier_share * static_cast<double>(config.n) + 0.5));
}

ScenarioSample generate_scenario_sample(const ScenarioConfig& config, std::size_t replication) {
    const std::size_t outliers = outlier_count(config);
    const std::size_t n = config.n;
    const std::size_t clean = n - outliers;
    const auto spread = [&](double second) {
        return config.variance_convention == VarianceConvention::Variance ? std::sqrt(second) : second;
    };

    Rng rng = make_stream(derive_seed(config.seed, replication), 0);
    auto draw = [&](double mean, double second) {
        return std::normal_distribution<double>(mean, spread(second))(rng);
    };

    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), 1);
    std::vector<int> group(n, 0);
    for (std::size_t i = 0; i < clean; ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        x(r, 0) = draw(0.0, 1.0);
        y(r) = kTrueSlope * x(r, 0) + draw(0.0, 2.0 / 3.0);
    }
    const std::size_t first_cluster = config.scenario == 4 ? (outliers + 1) / 2 : outliers;
    for (std::size_t j = 0; j < outliers; ++j) {
        const auto r = static_cast<Eigen::Index>(clean + j);
        const bool second = j >= first_cluster;
        group[clean + j] = second ? 2 : 1;
        switch (config.scenario) {
            case 2:
                x(r, 0) = draw(0.0, 2.0);
                y(r) = draw(0.0, 2.0);
                break;
            case 3:
            case 4:
                x(r, 0) = second ? draw(-2.0, 0.5) : draw(2.0, 0.5);
                y(r) = second ? draw(1.0, 2.0 / 3.0) : draw(-1.0, 2.0 / 3.0);
                break;
            default:
                break;
        }
    }
    return ScenarioSample{Dataset(std::move(y), std::move(x), {"x"}, config.add_intercept), std::move(group)};
}

Dataset generate_scenario(const ScenarioConfig& config, std::size_t replication) {
    return generate_scenario_sample(config, replication).data;
}

NamedEstimator standard_estimator(EstimatorKind kind, const FitConfig& config) {
    return NamedEstimator{std::string(estimator_name(kind)),
                          [estimator = make_estimator(kind, config)](const Dataset& d, std::uint64_t seed) {
                              return estimator(d, seed)(d.add_intercept() ? 1 : 0);
                          }};
}

JarqueBera jarque_bera(std::span<const double> samples) {
    if (samples.size() < 8) {
        throw Error(ErrorCode::TooFewSamples, "Jarque-Bera needs at least 8 values, got " +
                                                  std::to_string(samples.size()));
    }
    const double n = static_cast<double>(samples.size());
    const double m = mean(samples);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double v : samples) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) return {};
    const double skew = m3 / std::pow(m2, 1.5);
    const double excess_kurtosis = m4 / (m2 * m2) - 3.0;
    JarqueBera out;
    out.statistic = n / 6.0 * (skew * skew + excess_kurtosis * excess_kurtosis / 4.0);
    out.p_value = std::exp(-out.statistic / 2.0);
    return out;
}

MetricsTable run_benchmark(const ScenarioConfig& config, const std::vector<NamedEstimator>& estimators) {
    validate(config);
    if (config.replications < 10) {
        throw Error(ErrorCode::InvalidArgument, "a benchmark needs at least 10 replications");
    }
    const std::size_t reps = config.replications;
    const std::size_t count = estimators.size();
    std::vector<std::optional<double>> results(reps * count);
    parallel_for(reps, config.threads, [&](std::size_t r) {
        const Dataset data = generate_scenario(config, r);
        const std::uint64_t replication_seed = derive_seed(config.seed, r);
        for (std::size_t e = 0; e < count; ++e) {
            try {
                results[r * count + e] = estimators[e].slope(data, derive_seed(replication_seed, 1 + e));
            } catch (const Error& err) {
                if (!is_degenerate_sample_error(err.code())) throw;
            }
        }
    });

    MetricsTable table;
    table.config = config;
    for (std::size_t e = 0; e < count; ++e) {
        EstimatorMetrics m;
        m.name = estimators[e].name;
        for (std::size_t r = 0; r < reps; ++r) {
            if (const auto& v = results[r * count + e]) {
                m.estimates.push_back(*v);
                m.replications.push_back(r);
            } else {
                ++m.failures;
            }
        }
        const double nan = std::nan("");
        if (m.estimates.empty()) {
            m.mse = m.mean_abs_bias = m.std_dev = m.jarque_bera_statistic = m.jarque_bera_p = nan;
        } else {
            double squared = 0.0;
            double absolute = 0.0;
            for (const double b : m.estimates) {
                squared += (b - kTrueSlope) * (b - kTrueSlope);
                absolute += std::abs(b - kTrueSlope);
            }
            const auto ok = static_cast<double>(m.estimates.size());
            m.mse = squared / ok;
            m.mean_abs_bias = absolute / ok;
            m.std_dev = m.estimates.size() >= 2 ? sample_sd(m.estimates) : nan;
            if (m.estimates.size() >= 8) {
                const auto jb = jarque_bera(m.estimates);
                m.jarque_bera_statistic = jb.statistic;
                m.jarque_bera_p = jb.p_value;
            } else {
                m.jarque_bera_statistic = m.jarque_bera_p = nan;
            }
        }
        table.rows.push_back(std::move(m));
    }
    return table;
}

void write_metrics_csv(std::ostream& out, const MetricsTable& table) {
    out << "scenario,n,outlier_share,estimator,replications_ok,failures,mse,mean_abs_bias,std_dev,"
           "jarque_bera_stat,jarque_bera_p\n";
    const auto& c = table.config;
    const double share = c.scenario == 1 ? 0.0 : c.outlier_share;
    for (const auto& m : table.rows) {
        out << c.scenario << ',' << c.n << ',' << format_number(share) << ',' << m.name << ','
            << m.estimates.size() << ',' << m.failures << ',' << format_number(m.mse) << ','
            << format_number(m.mean_abs_bias) << ',' << format_number(m.std_dev) << ','
            << format_number(m.jarque_bera_statistic) << ',' << format_number(m.jarque_bera_p) << '\n';
    }
}

void write_metrics_text(std::ostream& out, const MetricsTable& table) {
    const auto& c = table.config;
    char buf[160];
    std::snprintf(buf, sizeof buf, "Scenario %d, N = %zu, outlier share = %.4g, R = %zu\n", c.scenario, c.n,
                  c.scenario == 1 ? 0.0 : c.outlier_share, c.replications);
    out << buf;
    struct Block {
        const char* title;
        double EstimatorMetrics::*field;
    };
    const Block blocks[] = {{"Mean Squared Error", &EstimatorMetrics::mse},
                            {"Mean Absolute Bias", &EstimatorMetrics::mean_abs_bias},
                            {"Standard Deviation", &EstimatorMetrics::std_dev},
                            {"Jarque Bera Statistic (p-value)", &EstimatorMetrics::jarque_bera_p}};
    for (const auto& block : blocks) {
        out << "  " << block.title << '\n';
        for (const auto& m : table.rows) {
            std::snprintf(buf, sizeof buf, "    %-8s %10.4f\n", m.name.c_str(), m.*(block.field));
            out << buf;
        }
    }
}

void write_draws_csv(std::ostream& out, const MetricsTable& table) {
    out << "replication,estimator,estimate\n";
    for (const auto& m : table.rows) {
        for (std::size_t i = 0; i < m.estimates.size(); ++i) {
            out << m.replications[i] << ',' << m.name << ',' << format_number(m.estimates[i]) << '\n';
        }
    }
}

}  // namespace sfr
