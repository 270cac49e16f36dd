#include "sfr/annealing.hpp"

#include "sfr/data_io.hpp"
#include "sfr/error.hpp"
#include "sfr/linear_model.hpp"
#include "sfr/parallel.hpp"
#include "sfr/random.hpp"
#include "sfr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <ostream>

namespace sfr {
namespace {

std::size_t target_index(const Dataset& data, const AnnealingConfig& config) {
    const std::size_t target = config.target_coefficient.value_or(data.add_intercept() ? 1 : 0);
    if (target >= data.k()) {
        throw Error(ErrorCode::InvalidArgument, "target coefficient " + std::to_string(target) +
                                                    " out of range for " + std::to_string(data.k()) +
                                                    " coefficients");
    }
    return target;
}

// Target coefficient at each grid point, removing rows in `order`.
std::vector<double> path_estimates(const Dataset& data, const std::vector<std::size_t>& order,
                                   const std::vector<std::size_t>& grid, std::size_t target) {
    const auto& design = data.design();
    const auto& y = data.y();
    std::vector<bool> dropped(data.n(), false);
    std::vector<double> estimates;
    estimates.reserve(grid.size());
    std::size_t removed = 0;
    std::vector<Eigen::Index> keep;
    for (std::size_t step = 0; step < grid.size(); ++step) {
        while (removed < grid[step]) dropped[order[removed++]] = true;
        keep.clear();
        for (std::size_t i = 0; i < dropped.size(); ++i) {
            if (!dropped[i]) keep.push_back(static_cast<Eigen::Index>(i));
        }
        try {
            const Eigen::MatrixXd a = design(keep, Eigen::all);
            const Eigen::VectorXd b = y(keep);
            estimates.push_back(solve_least_squares(a, b)(static_cast<Eigen::Index>(target)));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::RankDeficient) throw;
            throw Error(ErrorCode::RankDeficient, "annealing step " + std::to_string(step) + " (" +
                                                      std::to_string(grid[step]) + " rows dropped): " + e.what());
        }
    }
    return estimates;
}

AnnealingPath build_path(const Dataset& data, const Eigen::VectorXd& scores, const std::vector<std::size_t>& grid,
                         std::size_t target) {
    if (static_cast<std::size_t>(scores.size()) != data.n()) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(data.n()) + " scores, got " +
                                                    std::to_string(scores.size()));
    }
    auto order = removal_order(scores);
    const auto estimates = path_estimates(data, order, grid, target);
    AnnealingPath path;
    path.target_coefficient = target;
    order.resize(grid.back());
    path.dropped_order = std::move(order);
    const double nan = std::nan("");
    for (std::size_t s = 0; s < grid.size(); ++s) {
        path.steps.push_back({grid[s], static_cast<double>(grid[s]) / static_cast<double>(data.n()), estimates[s],
                              nan, nan, nan});
    }
    return path;
}

}  // namespace

std::vector<std::size_t> removal_order(const Eigen::VectorXd& scores) {
    std::vector<std::size_t> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores(static_cast<Eigen::Index>(a)) < scores(static_cast<Eigen::Index>(b));
    });
    return order;
}

std::vector<std::size_t> annealing_grid(std::size_t n, std::size_t k, const AnnealingConfig& config) {
    if (!(config.share > 0.0 && config.share <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "annealing share must lie in (0, 1]");
    }
    // The small offset keeps products like 0.07 * 100 from rounding up.
    const auto deepest = static_cast<std::size_t>(std::ceil(config.share * static_cast<double>(n) - 1e-9));
    if (deepest + k + 1 > n) {
        throw Error(ErrorCode::InvalidArgument, "annealing " + std::to_string(deepest) + " of " + std::to_string(n) +
                                                    " rows leaves too few to fit " + std::to_string(k) +
                                                    " coefficients");
    }
    const std::size_t points = config.n_steps == 0 ? std::min<std::size_t>(deepest + 1, 201)
                                                   : std::min(config.n_steps, deepest + 1);
    if (points <= 1) return {0};
    std::vector<std::size_t> grid;
    grid.reserve(points);
    for (std::size_t j = 0; j < points; ++j) {
        const double at = static_cast<double>(j) * static_cast<double>(deepest) / static_cast<double>(points - 1);
        const auto d = static_cast<std::size_t>(std::llround(at));
        if (grid.empty() || d > grid.back()) grid.push_back(d);
    }
    return grid;
}

AnnealingPath anneal(const Dataset& data, const Eigen::VectorXd& scores, const AnnealingConfig& config) {
    const auto grid = annealing_grid(data.n(), data.k(), config);
    return build_path(data, scores, grid, target_index(data, config));
}

AnnealingPath anneal_with_bootstrap(const Dataset& data, const ScoringConfig& scoring, const AnnealingConfig& config) {
    if (config.bootstrap_b < 2) {
        throw Error(ErrorCode::InvalidArgument, "annealing bootstrap needs at least 2 replications");
    }
    const auto grid = annealing_grid(data.n(), data.k(), config);
    const std::size_t target = target_index(data, config);
    AnnealingPath path = build_path(data, score_sample(data, scoring).scores, grid, target);

    ScoringConfig inner = scoring;
    inner.threads = 1;
    if (config.bootstrap_scoring_iterations != 0) inner.iterations = config.bootstrap_scoring_iterations;

    std::vector<std::optional<std::vector<double>>> draws(config.bootstrap_b);
    parallel_for(config.bootstrap_b, config.threads, [&](std::size_t r) {
        const std::uint64_t replicate_seed = derive_seed(config.seed, r);
        Rng rng = make_stream(replicate_seed, 0);
        const Dataset resample = data.subset(resample_rows(rng, data.n()));
        ScoringConfig cfg = inner;
        cfg.seed = derive_seed(replicate_seed, 1);
        try {
            const auto order = removal_order(score_sample(resample, cfg).scores);
            draws[r] = path_estimates(resample, order, grid, target);
        } catch (const Error& e) {
            if (!is_degenerate_sample_error(e.code())) throw;
        }
    });

    std::size_t ok = 0;
    for (const auto& d : draws) ok += d.has_value() ? 1 : 0;
    if (2 * ok < config.bootstrap_b) {
        throw Error(ErrorCode::TooManyFailures, "only " + std::to_string(ok) + " of " +
                                                    std::to_string(config.bootstrap_b) +
                                                    " annealing replicates succeeded");
    }
    Eigen::MatrixXd matrix(static_cast<Eigen::Index>(ok), static_cast<Eigen::Index>(grid.size()));
    Eigen::Index row = 0;
    for (const auto& d : draws) {
        if (!d) continue;
        for (std::size_t s = 0; s < grid.size(); ++s) matrix(row, static_cast<Eigen::Index>(s)) = (*d)[s];
        ++row;
    }
    Eigen::VectorXd point(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t s = 0; s < grid.size(); ++s) point(static_cast<Eigen::Index>(s)) = path.steps[s].estimate;
    Eigen::VectorXd se;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    summarize_replicates(matrix, point, config.ci, se, lower, upper);
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const auto i = static_cast<Eigen::Index>(s);
        path.steps[s].std_error = se(i);
        path.steps[s].ci_lower = lower(i);
        path.steps[s].ci_upper = upper(i);
    }
    path.b_effective = ok;
    return path;
}

std::vector<BalanceRow> covariate_balance(const Dataset& data, const AnnealingPath& path) {
    std::vector<bool> dropped(data.n(), false);
    for (const auto r : path.dropped_order) dropped[r] = true;
    std::vector<BalanceRow> rows;
    for (Eigen::Index j = 0; j < data.x().cols(); ++j) {
        std::vector<double> out_group;
        std::vector<double> in_group;
        for (std::size_t i = 0; i < data.n(); ++i) {
            (dropped[i] ? out_group : in_group).push_back(data.x()(static_cast<Eigen::Index>(i), j));
        }
        BalanceRow b;
        b.feature = data.feature_names()[static_cast<std::size_t>(j)];
        b.mean_dropped = mean(out_group);
        b.mean_kept = mean(in_group);
        const double var_out = out_group.size() >= 2 ? std::pow(sample_sd(out_group), 2) : 0.0;
        const double var_in = in_group.size() >= 2 ? std::pow(sample_sd(in_group), 2) : 0.0;
        const double pooled = std::sqrt(0.5 * (var_out + var_in));
        b.standardized_difference = pooled > 0.0 ? (b.mean_dropped - b.mean_kept) / pooled : std::nan("");
        rows.push_back(std::move(b));
    }
    return rows;
}

void write_path_csv(std::ostream& out, const AnnealingPath& path) {
    out << "n_dropped,share,estimate,ci_lower,ci_upper,std_error\n";
    for (const auto& s : path.steps) {
        out << s.n_dropped << ',' << format_number(s.share_dropped) << ',' << format_number(s.estimate) << ','
            << format_number(s.ci_lower) << ',' << format_number(s.ci_upper) << ',' << format_number(s.std_error)
            << '\n';
    }
}

}  // namespace sfr
