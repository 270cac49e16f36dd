#include "sfr/baselines.hpp"

#include "sfr/error.hpp"
#include "sfr/parallel.hpp"
#include "sfr/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sfr {
namespace {

// Standard normal 0.75 quantile; makes the MAD consistent for sigma.
constexpr double kMadConsistency = 0.6744897501960817;

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double huber_objective(const Eigen::VectorXd& residuals, double scale, double c) {
    double total = 0.0;
    for (const double r : residuals) total += huber_rho(scale > 0.0 ? r / scale : 0.0, c);
    return total;
}

}  // namespace

double huber_rho(double u, double c) noexcept {
    const double a = std::abs(u);
    return a <= c ? 0.5 * u * u : c * a - 0.5 * c * c;
}

double median_absolute_deviation(const Eigen::VectorXd& values) {
    std::vector<double> v(values.data(), values.data() + values.size());
    const double center = median_of(v);
    for (auto& x : v) x = std::abs(x - center);
    return median_of(std::move(v));
}

HuberFit fit_huber(const Dataset& data, const HuberConfig& config) {
    if (!(config.tuning_constant > 0.0) || !(config.tolerance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "Huber tuning constant and tolerance must be positive");
    }
    if (config.scale == HuberScale::Fixed && !(config.fixed_scale > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "fixed Huber scale must be positive");
    }
    const double c = config.tuning_constant;
    const auto& design = data.design();
    const auto& y = data.y();

    HuberFit out;
    out.fit = fit_ols(data);
    Eigen::VectorXd beta = out.fit.coefficients;
    Eigen::VectorXd residuals = out.fit.residuals;

    // Residual scales below this are rounding noise from an exact fit.
    const double noise = 1e-12 * (1.0 + y.cwiseAbs().maxCoeff());
    auto estimate_scale = [&](const Eigen::VectorXd& r) {
        if (config.scale == HuberScale::Fixed) return config.fixed_scale;
        std::vector<double> a(static_cast<std::size_t>(r.size()));
        for (Eigen::Index i = 0; i < r.size(); ++i) a[static_cast<std::size_t>(i)] = std::abs(r(i));
        const double s = median_of(std::move(a)) / kMadConsistency;
        return s <= noise ? 0.0 : s;
    };

    out.scale = estimate_scale(residuals);
    out.objective_trace.push_back(huber_objective(residuals, out.scale, c));
    Eigen::VectorXd weights(residuals.size());
    while (out.iterations < config.max_iterations) {
        if (out.scale == 0.0) {
            // Perfect fit: every weight is 1 and OLS is already the answer.
            out.converged = true;
            break;
        }
        for (Eigen::Index i = 0; i < residuals.size(); ++i) {
            const double a = std::abs(residuals(i));
            weights(i) = a <= c * out.scale ? 1.0 : c * out.scale / a;
        }
        const Eigen::VectorXd next = solve_weighted_least_squares(design, y, weights);
        const double change = (next - beta).cwiseAbs().maxCoeff();
        beta = next;
        residuals = y - design * beta;
        ++out.iterations;
        out.objective_trace.push_back(huber_objective(residuals, out.scale, c));
        if (change < config.tolerance) {
            out.converged = true;
            break;
        }
        out.scale = estimate_scale(residuals);
    }
    out.fit.coefficients = beta;
    out.fit.fitted_values = design * beta;
    out.fit.residuals = y - out.fit.fitted_values;
    return out;
}

RansacFit fit_ransac(const Dataset& data, const RansacConfig& config) {
    const std::size_t n = data.n();
    const std::size_t k = data.k();
    const std::size_t m = config.min_sample_size == 0 ? k : config.min_sample_size;
    if (m < k || m >= n) {
        throw Error(ErrorCode::InvalidArgument, "RANSAC sample size " + std::to_string(m) + " must lie in [" +
                                                    std::to_string(k) + ", " + std::to_string(n - 1) + "]");
    }
    if (config.max_trials < 1) {
        throw Error(ErrorCode::InvalidArgument, "RANSAC needs at least one trial");
    }
    if (config.residual_threshold && !(*config.residual_threshold > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "RANSAC residual threshold must be positive");
    }
    const double threshold =
        config.residual_threshold ? *config.residual_threshold : median_absolute_deviation(fit_ols(data).residuals);

    const auto& design = data.design();
    const auto& y = data.y();

    struct Trial {
        bool valid = false;
        std::size_t inliers = 0;
        Eigen::VectorXd coefficients;
    };
    std::vector<Trial> trials(config.max_trials);
    parallel_for(config.max_trials, config.threads, [&](std::size_t t) {
        Rng rng = make_stream(config.seed, t);
        SubsetSampler sampler(n);
        SubsetSolver solver(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
        std::vector<std::size_t> rows(m);
        Trial& trial = trials[t];
        for (std::size_t attempt = 0; attempt <= config.max_redraws_per_trial && !trial.valid; ++attempt) {
            sampler.draw(rng, rows);
            trial.valid = solver.solve(design, y, rows, trial.coefficients);
        }
        if (!trial.valid) return;
        const Eigen::VectorXd r = y - design * trial.coefficients;
        trial.inliers = static_cast<std::size_t>((r.array().abs() <= threshold).count());
    });

    RansacFit out;
    out.threshold = threshold;
    const auto stop_at = static_cast<double>(n) * config.stop_inlier_fraction;
    bool found = false;
    for (std::size_t t = 0; t < trials.size(); ++t) {
        out.trials_run = t + 1;
        if (!trials[t].valid) continue;
        if (!found || trials[t].inliers > out.inlier_count) {
            found = true;
            out.best_trial = t;
            out.inlier_count = trials[t].inliers;
        }
        if (config.stop_inlier_fraction < 1.0 && static_cast<double>(trials[t].inliers) >= stop_at) break;
    }
    if (!found || out.inlier_count < k + 1) {
        throw Error(ErrorCode::NoConsensus, "best RANSAC trial has " + std::to_string(out.inlier_count) +
                                                " inliers, need at least " + std::to_string(k + 1));
    }
    out.trial_coefficients = trials[out.best_trial].coefficients;
    const Eigen::VectorXd trial_residuals = y - design * out.trial_coefficients;
    out.inlier_mask.assign(n, false);
    std::vector<Eigen::Index> consensus;
    consensus.reserve(out.inlier_count);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(trial_residuals(static_cast<Eigen::Index>(i))) <= threshold) {
            out.inlier_mask[i] = true;
            consensus.push_back(static_cast<Eigen::Index>(i));
        }
    }
    const Eigen::MatrixXd a = design(consensus, Eigen::all);
    const Eigen::VectorXd b = y(consensus);
    out.fit.coefficients = solve_least_squares(a, b);
    out.fit.fitted_values = design * out.fit.coefficients;
    out.fit.residuals = y - out.fit.fitted_values;
    return out;
}

}  // namespace sfr
