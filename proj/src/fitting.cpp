#include "sfr/fitting.hpp"

#include "sfr/data_io.hpp"
#include "sfr/error.hpp"
#include "sfr/linear_model.hpp"
#include "sfr/stats.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sfr {
namespace {

void fill_rows(FitTable& table, const Dataset& data, EstimatorKind kind, const BootstrapResult& boot) {
    const auto names = data.coefficient_names();
    for (Eigen::Index j = 0; j < boot.point_estimate.size(); ++j) {
        FitRow row;
        row.estimator = std::string(estimator_name(kind));
        row.coefficient = names[static_cast<std::size_t>(j)];
        row.coef = boot.point_estimate(j);
        row.std_err = boot.standard_errors(j);
        row.t = row.std_err > 0.0 ? row.coef / row.std_err : std::nan("");
        row.p = row.std_err > 0.0 ? normal_two_sided_p(row.t) : std::nan("");
        row.ci_lower = boot.ci_lower(j);
        row.ci_upper = boot.ci_upper(j);
        row.b_effective = boot.b_effective;
        table.rows.push_back(std::move(row));
    }
}

void fill_unavailable(FitTable& table, const Dataset& data, EstimatorKind kind, const Eigen::VectorXd* estimate,
                      const std::string& note) {
    const auto names = data.coefficient_names();
    const double nan = std::nan("");
    for (std::size_t j = 0; j < names.size(); ++j) {
        FitRow row;
        row.estimator = std::string(estimator_name(kind));
        row.coefficient = names[j];
        row.coef = estimate != nullptr ? (*estimate)(static_cast<Eigen::Index>(j)) : nan;
        row.std_err = row.t = row.p = row.ci_lower = row.ci_upper = nan;
        row.inference_available = false;
        row.note = note;
        table.rows.push_back(std::move(row));
    }
}

BootstrapOptions bootstrap_options(const FitConfig& config) {
    BootstrapOptions options;
    options.replications = config.bootstrap_b;
    options.seed = config.seed;
    options.threads = config.threads;
    options.ci = config.ci;
    return options;
}

}  // namespace

double reliability_weight(WeightScheme scheme, double score) noexcept {
    return scheme == WeightScheme::Squared ? score * score : score;
}

Eigen::VectorXd reliability_weights(const Eigen::VectorXd& scores, WeightScheme scheme) {
    return scores.unaryExpr([scheme](double s) { return reliability_weight(scheme, s); });
}

std::string_view estimator_name(EstimatorKind kind) noexcept {
    switch (kind) {
        case EstimatorKind::Ols: return "OLS";
        case EstimatorKind::Huber: return "HUBER";
        case EstimatorKind::Ransac: return "RANSAC";
        case EstimatorKind::Sfr: return "SFR";
    }
    return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "ols") return EstimatorKind::Ols;
    if (lower == "huber") return EstimatorKind::Huber;
    if (lower == "ransac") return EstimatorKind::Ransac;
    if (lower == "sfr") return EstimatorKind::Sfr;
    throw Error(ErrorCode::InvalidArgument, "unknown estimator '" + std::string(name) + "'");
}

Eigen::VectorXd sfr_coefficients(const Dataset& data, const ScoringConfig& scoring, WeightScheme scheme) {
    const auto scores = score_sample(data, scoring);
    return fit_wls(data, reliability_weights(scores.scores, scheme)).coefficients;
}

Estimator make_estimator(EstimatorKind kind, const FitConfig& config) {
    switch (kind) {
        case EstimatorKind::Ols:
            return [](const Dataset& d, std::uint64_t) { return fit_ols(d).coefficients; };
        case EstimatorKind::Huber:
            return [huber = config.huber](const Dataset& d, std::uint64_t) {
                return fit_huber(d, huber).fit.coefficients;
            };
        case EstimatorKind::Ransac:
            return [ransac = config.ransac](const Dataset& d, std::uint64_t seed) {
                RansacConfig cfg = ransac;
                cfg.seed = seed;
                cfg.threads = 1;
                return fit_ransac(d, cfg).fit.coefficients;
            };
        case EstimatorKind::Sfr:
            return [scoring = config.scoring, scheme = config.scheme](const Dataset& d, std::uint64_t seed) {
                ScoringConfig cfg = scoring;
                cfg.seed = seed;
                cfg.threads = 1;
                return sfr_coefficients(d, cfg, scheme);
            };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown estimator");
}

FitTable fit_sfr(const Dataset& data, const FitConfig& config) {
    FitTable table;
    fill_rows(table, data, EstimatorKind::Sfr,
              pairs_bootstrap(data, make_estimator(EstimatorKind::Sfr, config), bootstrap_options(config)));
    return table;
}

FitTable fit_table_compare(const Dataset& data, const std::vector<EstimatorKind>& estimators,
                           const FitConfig& config) {
    if (estimators.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no estimators requested");
    }
    FitTable table;
    for (const auto kind : estimators) {
        const auto estimator = make_estimator(kind, config);
        try {
            fill_rows(table, data, kind, pairs_bootstrap(data, estimator, bootstrap_options(config)));
        } catch (const Error& e) {
            if (is_validation_error(e.code())) throw;
            try {
                const Eigen::VectorXd estimate = estimator(data, point_estimate_seed(config.seed));
                fill_unavailable(table, data, kind, &estimate, e.what());
            } catch (const Error& inner) {
                if (is_validation_error(inner.code())) throw;
                fill_unavailable(table, data, kind, nullptr, inner.what());
            }
        }
    }
    return table;
}

void write_fit_csv(std::ostream& out, const FitTable& table) {
    out << "estimator,coefficient,coef,std_err,t,p_value,ci_lower,ci_upper,b_effective,note\n";
    for (const auto& r : table.rows) {
        std::string note = r.note;
        std::replace(note.begin(), note.end(), '"', '\'');
        out << r.estimator << ',' << r.coefficient << ',' << format_number(r.coef) << ','
            << format_number(r.std_err) << ',' << format_number(r.t) << ',' << format_number(r.p) << ','
            << format_number(r.ci_lower) << ',' << format_number(r.ci_upper) << ',' << r.b_effective << ','
            << (note.empty() ? "" : "\"" + note + "\"") << '\n';
    }
}

void write_fit_text(std::ostream& out, const FitTable& table) {
    std::size_t name_width = 9;
    for (const auto& r : table.rows) {
        name_width = std::max(name_width, r.estimator.size() + 1 + r.coefficient.size());
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s %12s %12s %10s %8s %12s %12s\n", static_cast<int>(name_width), "",
                  "Coef.", "Std.Err.", "t", "P>|t|", "[0.025", "0.975]");
    out << buf;
    for (const auto& r : table.rows) {
        const std::string label = r.estimator + " " + r.coefficient;
        std::snprintf(buf, sizeof buf, "%-*s %12.4f %12.4f %10.4f %8.4f %12.4f %12.4f\n",
                      static_cast<int>(name_width), label.c_str(), r.coef, r.std_err, r.t, r.p, r.ci_lower,
                      r.ci_upper);
        out << buf;
        if (!r.note.empty()) out << "  note: " << r.note << '\n';
    }
}

}  // namespace sfr
