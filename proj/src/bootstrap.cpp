#include "sfr/bootstrap.hpp"

#include "sfr/error.hpp"
#include "sfr/parallel.hpp"
#include "sfr/random.hpp"
#include "sfr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace sfr {

std::uint64_t point_estimate_seed(std::uint64_t seed) noexcept { return seed; }

void summarize_replicates(const Eigen::MatrixXd& draws, const Eigen::VectorXd& point, CiMethod ci,
                          Eigen::VectorXd& standard_errors, Eigen::VectorXd& lower, Eigen::VectorXd& upper) {
    const Eigen::Index k = point.size();
    standard_errors.resize(k);
    lower.resize(k);
    upper.resize(k);
    const Eigen::Index b = draws.rows();
    std::vector<double> column(static_cast<std::size_t>(b));
    for (Eigen::Index j = 0; j < k; ++j) {
        double se = std::nan("");
        if (b >= 2) {
            const double mean = draws.col(j).mean();
            const double ss = (draws.col(j).array() - mean).square().sum();
            se = std::sqrt(ss / static_cast<double>(b - 1));
        }
        standard_errors(j) = se;
        if (ci == CiMethod::Normal) {
            lower(j) = point(j) - kNormalQuantile975 * se;
            upper(j) = point(j) + kNormalQuantile975 * se;
        } else {
            for (Eigen::Index r = 0; r < b; ++r) column[static_cast<std::size_t>(r)] = draws(r, j);
            std::sort(column.begin(), column.end());
            lower(j) = interpolated_quantile(column, 0.025);
            upper(j) = interpolated_quantile(column, 0.975);
        }
    }
}

BootstrapResult pairs_bootstrap(const Dataset& data, const Estimator& estimator, const BootstrapOptions& options) {
    if (options.replications < 2) {
        throw Error(ErrorCode::InvalidArgument, "bootstrap needs at least 2 replications");
    }
    BootstrapResult result;
    result.point_estimate = estimator(data, point_estimate_seed(options.seed));
    const Eigen::Index k = result.point_estimate.size();

    std::vector<std::optional<Eigen::VectorXd>> draws(options.replications);
    parallel_for(options.replications, options.threads, [&](std::size_t r) {
        const std::uint64_t replicate_seed = derive_seed(options.seed, r);
        Rng rng = make_stream(replicate_seed, 0);
        const auto rows = resample_rows(rng, data.n());
        try {
            draws[r] = estimator(data.subset(rows), derive_seed(replicate_seed, 1));
        } catch (const Error& e) {
            if (!is_degenerate_sample_error(e.code())) throw;
        }
    });

    std::size_t ok = 0;
    for (const auto& d : draws) ok += d.has_value() ? 1 : 0;
    if (2 * ok < options.replications) {
        throw Error(ErrorCode::TooManyFailures, "only " + std::to_string(ok) + " of " +
                                                    std::to_string(options.replications) +
                                                    " bootstrap replicates succeeded");
    }
    result.b_effective = ok;
    result.replicate_estimates.resize(static_cast<Eigen::Index>(ok), k);
    Eigen::Index row = 0;
    for (const auto& d : draws) {
        if (d) result.replicate_estimates.row(row++) = d->transpose();
    }
    summarize_replicates(result.replicate_estimates, result.point_estimate, options.ci, result.standard_errors,
                         result.ci_lower, result.ci_upper);
    return result;
}

}  // namespace sfr
