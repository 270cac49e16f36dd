#include "sfr/scoring.hpp"

#include "sfr/data_io.hpp"
#include "sfr/error.hpp"
#include "sfr/linear_model.hpp"
#include "sfr/parallel.hpp"
#include "sfr/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace sfr {
namespace {

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double v) noexcept {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const noexcept { return sum + carry; }
};

// Per-row loss totals for a contiguous block of iterations.
struct LossTotals {
    std::vector<CompensatedSum> loss;
    std::vector<std::size_t> count;
    std::size_t iterations = 0;

    explicit LossTotals(std::size_t n) : loss(n), count(n, 0) {}

    void merge(const LossTotals& other) {
        for (std::size_t i = 0; i < loss.size(); ++i) {
            loss[i].add(other.loss[i].sum);
            loss[i].add(other.loss[i].carry);
            count[i] += other.count[i];
        }
        iterations += other.iterations;
    }
};

// Evaluates one sub-sample fit on every out-of-bag row.
class OobEvaluator {
public:
    OobEvaluator(const Dataset& data, std::size_t eta, Loss loss)
        : data_(data),
          loss_(loss),
          solver_(static_cast<Eigen::Index>(eta), static_cast<Eigen::Index>(data.k())),
          in_bag_(data.n(), false),
          predictions_(static_cast<Eigen::Index>(data.n())) {}

    // Returns false when the rows are rank deficient.
    bool evaluate(std::span<const std::size_t> rows, LossTotals& totals) {
        if (!solver_.solve(data_.design(), data_.y(), rows, coefficients_)) return false;
        predictions_.noalias() = data_.design() * coefficients_;
        for (const auto r : rows) in_bag_[r] = true;
        const auto& y = data_.y();
        for (std::size_t i = 0; i < in_bag_.size(); ++i) {
            if (in_bag_[i]) continue;
            const double residual = y(static_cast<Eigen::Index>(i)) - predictions_(static_cast<Eigen::Index>(i));
            totals.loss[i].add(loss_ == Loss::Absolute ? std::abs(residual) : residual * residual);
            ++totals.count[i];
        }
        for (const auto r : rows) in_bag_[r] = false;
        ++totals.iterations;
        return true;
    }

private:
    const Dataset& data_;
    Loss loss_;
    SubsetSolver solver_;
    std::vector<bool> in_bag_;
    Eigen::VectorXd predictions_;
    Eigen::VectorXd coefficients_;
};

std::size_t validated_subsample_size(const Dataset& data, const ScoringConfig& config) {
    const std::size_t eta = resolved_subsample_size(data, config);
    if (eta < data.k() || eta >= data.n()) {
        throw Error(ErrorCode::InvalidArgument, "sub-sample size " + std::to_string(eta) + " must lie in [" +
                                                    std::to_string(data.k()) + ", " +
                                                    std::to_string(data.n() - 1) + "]");
    }
    return eta;
}

ReliabilityScores finish(const LossTotals& totals, OobAveraging averaging, double tolerance) {
    if (totals.iterations == 0) {
        throw Error(ErrorCode::AllIterationsDegenerate, "every sub-sample was rank deficient");
    }
    const std::size_t n = totals.count.size();
    ReliabilityScores out;
    out.effective_iterations = totals.iterations;
    out.oob_counts = totals.count;
    out.expected_losses.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (totals.count[i] == 0) {
            throw Error(ErrorCode::NeverOutOfBag,
                        "row " + std::to_string(i) + " was never out-of-bag; increase the iteration count");
        }
        const double denominator = averaging == OobAveraging::PerObservation
                                       ? static_cast<double>(totals.count[i])
                                       : static_cast<double>(totals.iterations);
        out.expected_losses(static_cast<Eigen::Index>(i)) = totals.loss[i].value() / denominator;
    }
    out.scores = reliability_from_losses(out.expected_losses, tolerance);
    return out;
}

// Loss spread below this is floating-point noise from exact fits.
double loss_tolerance(const Dataset& data, Loss loss) {
    const double scale = 1.0 + data.y().cwiseAbs().maxCoeff();
    const double tol = 1e-12 * scale;
    return loss == Loss::Squared ? tol * tol : tol;
}

}  // namespace

std::size_t resolved_subsample_size(const Dataset& data, const ScoringConfig& config) {
    return config.subsample_size == 0 ? data.k() + 1 : config.subsample_size;
}

Eigen::VectorXd reliability_from_losses(const Eigen::VectorXd& expected_losses, double tolerance) {
    const double hi = expected_losses.maxCoeff();
    const double lo = expected_losses.minCoeff();
    if (hi - lo <= tolerance) return Eigen::VectorXd::Ones(expected_losses.size());
    Eigen::VectorXd scores(expected_losses.size());
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        // + 0.0 turns a -0.0 at the maximum loss into +0.0
        scores(i) = std::clamp((expected_losses(i) - hi) / (lo - hi), 0.0, 1.0) + 0.0;
    }
    return scores;
}

ReliabilityScores score_sample(const Dataset& data, const ScoringConfig& config) {
    if (config.iterations < 1) {
        throw Error(ErrorCode::InvalidArgument, "scoring needs at least one iteration");
    }
    const std::size_t eta = validated_subsample_size(data, config);
    const std::size_t n = data.n();
    const std::size_t iterations = config.iterations;

    // Block boundaries depend only on the iteration count so the reduction
    // order is the same for every thread count.
    const std::size_t block = std::max<std::size_t>(32, (iterations + 63) / 64);
    const std::size_t blocks = (iterations + block - 1) / block;
    std::vector<LossTotals> partial(blocks, LossTotals(n));

    parallel_for(blocks, config.threads, [&](std::size_t b) {
        OobEvaluator evaluator(data, eta, config.loss);
        SubsetSampler sampler(n);
        std::vector<std::size_t> rows(eta);
        const std::size_t end = std::min(iterations, (b + 1) * block);
        for (std::size_t s = b * block; s < end; ++s) {
            Rng rng = make_stream(config.seed, s);
            for (std::size_t attempt = 0; attempt <= config.max_redraws_per_iteration; ++attempt) {
                sampler.draw(rng, rows);
                if (evaluator.evaluate(rows, partial[b])) break;
            }
        }
    });

    LossTotals totals(n);
    for (const auto& p : partial) totals.merge(p);
    return finish(totals, config.averaging, loss_tolerance(data, config.loss));
}

ReliabilityScores score_sample_exhaustive(const Dataset& data, const ScoringConfig& config) {
    const std::size_t eta = validated_subsample_size(data, config);
    const std::size_t n = data.n();

    // C(n, eta) with early exit above the guard.
    double subsets = 1.0;
    for (std::size_t i = 0; i < eta; ++i) {
        subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (subsets > static_cast<double>(kMaxExhaustiveSubsets)) {
            throw Error(ErrorCode::TooManySubsamples,
                        "exhaustive scoring would visit more than " + std::to_string(kMaxExhaustiveSubsets) +
                            " sub-samples");
        }
    }

    LossTotals totals(n);
    OobEvaluator evaluator(data, eta, config.loss);
    std::vector<std::size_t> rows(eta);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (;;) {
        (void)evaluator.evaluate(rows, totals);
        // Advance to the next combination in lexicographic order.
        std::size_t pos = eta;
        while (pos > 0 && rows[pos - 1] == n - eta + (pos - 1)) --pos;
        if (pos == 0) break;
        ++rows[pos - 1];
        for (std::size_t j = pos; j < eta; ++j) rows[j] = rows[j - 1] + 1;
    }
    return finish(totals, config.averaging, loss_tolerance(data, config.loss));
}

void write_scores_csv(std::ostream& out, const ReliabilityScores& scores) {
    out << "row_index,expected_loss,score,oob_count\n";
    for (Eigen::Index i = 0; i < scores.scores.size(); ++i) {
        out << i << ',' << format_number(scores.expected_losses(i)) << ',' << format_number(scores.scores(i)) << ','
            << scores.oob_counts[static_cast<std::size_t>(i)] << '\n';
    }
}

}  // namespace sfr
