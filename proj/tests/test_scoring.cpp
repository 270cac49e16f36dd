#include "oracles.hpp"
#include "test_helpers.hpp"

#include "sfr/error.hpp"
#include "sfr/scoring.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace {

sfr::ScoringConfig config(std::size_t iterations, std::uint64_t seed = 42, std::size_t threads = 1) {
    sfr::ScoringConfig c;
    c.iterations = iterations;
    c.seed = seed;
    c.threads = threads;
    return c;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("exhaustive scores on a line with one outlier") {
    const auto d = testing::line_with_outlier();
    auto c = config(0);
    c.subsample_size = 2;
    const auto r = sfr::score_sample_exhaustive(d, c);

    // Hand-derived expectations over all 15 pairs; the (2,2)/(2,10) pair is vertical and skipped.
    const std::vector<double> gamma{16.0 / 3.0, 32.0 / 9.0, 3.2, 32.0 / 9.0, 16.0 / 3.0, 8.0};
    const std::vector<std::size_t> counts{9, 9, 10, 9, 9, 10};
    CHECK(r.effective_iterations == 14);
    CHECK(r.oob_counts == counts);
    for (std::size_t i = 0; i < 6; ++i) {
        CAPTURE(i);
        CHECK(r.expected_losses(static_cast<Eigen::Index>(i)) == doctest::Approx(gamma[i]).epsilon(1e-12));
    }
    const std::vector<double> psi{0.5555555555555556, 0.9259259259259259, 1.0, 0.9259259259259259, 0.5555555555555556,
                                  0.0};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(r.scores(static_cast<Eigen::Index>(i)) == doctest::Approx(psi[i]).epsilon(1e-12));
    }
    CHECK(r.scores(5) == 0.0);

    const auto oracle_losses = oracle::exhaustive_pair_losses({0, 1, 2, 3, 4, 2}, {0, 1, 2, 3, 4, 10}, true);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(r.expected_losses(static_cast<Eigen::Index>(i)) == doctest::Approx(oracle_losses[i]).epsilon(1e-12));
    }
}

TEST_CASE("Monte Carlo scores converge to the exhaustive expectation") {
    const auto d = testing::line_with_outlier();
    auto c = config(0);
    c.subsample_size = 2;
    const auto exact = sfr::score_sample_exhaustive(d, c);
    c.iterations = 50'000;
    const auto mc = sfr::score_sample(d, c);
    CHECK((mc.scores - exact.scores).cwiseAbs().maxCoeff() <= 0.02);
    CHECK(mc.effective_iterations == 50'000);
}

TEST_CASE("exact fits score every row as fully reliable") {
    const std::vector<double> v{1, 2, 3};
    const auto r = sfr::score_sample(sfr::make_dataset(v, v, false), config(200));
    CHECK(r.scores == Eigen::VectorXd::Ones(3));
    CHECK(r.expected_losses.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("leave-one-out sub-samples") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    const std::vector<double> y{0.3, 1.1, 1.7, 3.4, 3.9};
    const auto d = sfr::make_dataset(y, x, true);
    auto c = config(0);
    c.subsample_size = 4;
    const auto r = sfr::score_sample_exhaustive(d, c);
    CHECK(r.effective_iterations == 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
        // Row i is out-of-bag only in the fit that leaves it out.
        CHECK(r.oob_counts[static_cast<std::size_t>(i)] == 1);
        std::vector<bool> mask(5, false);
        mask[static_cast<std::size_t>(i)] = true;
        const auto rest = d.without(mask);
        oracle::Matrix design;
        std::vector<double> yy;
        for (Eigen::Index j = 0; j < rest.n(); ++j) {
            design.push_back({1.0, rest.x()(j, 0)});
            yy.push_back(rest.y()(j));
        }
        const auto b = oracle::weighted_normal_equations(design, yy, std::vector<double>(yy.size(), 1.0));
        const auto u = static_cast<std::size_t>(i);
        CHECK(r.expected_losses(i) == doctest::Approx(std::abs(y[u] - b[0] - b[1] * x[u])).epsilon(1e-10));
    }
}

TEST_CASE("score invariants over random datasets") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        CAPTURE(seed);
        const bool intercept = seed % 3 != 0;
        const auto d = testing::random_dataset(seed, 20 + 3 * seed, 1 + seed % 3, intercept);
        const auto r = sfr::score_sample(d, config(300, seed));

        // Bounded, with both ends attained.
        CHECK(r.scores.minCoeff() == 0.0);
        CHECK(r.scores.maxCoeff() == 1.0);
        CHECK((r.scores.array() >= 0.0).all());
        CHECK((r.scores.array() <= 1.0).all());

        // Order reversal: higher expected loss never has a higher score.
        const auto ref = oracle::reverse_minmax(to_std(r.expected_losses));
        for (Eigen::Index i = 0; i < r.scores.size(); ++i) {
            CHECK(r.scores(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-12));
            for (Eigen::Index j = 0; j < r.scores.size(); ++j) {
                if (r.expected_losses(i) < r.expected_losses(j)) CHECK(r.scores(i) >= r.scores(j));
            }
        }

        // Adding a constant to y leaves scores unchanged when an intercept is fitted.
        if (intercept) {
            const auto shifted =
                sfr::score_sample(d.with_outcome((d.y().array() + 17.5).matrix()), config(300, seed));
            CHECK((shifted.scores - r.scores).cwiseAbs().maxCoeff() <= 1e-8);
        }

        // Thread count does not change a single bit.
        const auto threaded = sfr::score_sample(d, config(300, seed, 3));
        CHECK(threaded.scores == r.scores);
        CHECK(threaded.expected_losses == r.expected_losses);
        CHECK(threaded.oob_counts == r.oob_counts);
    }
}

TEST_CASE("Monte Carlo error shrinks with the iteration count") {
    const auto d = testing::random_dataset(77, 9, 1, true);
    const auto exact = sfr::score_sample_exhaustive(d, config(0));
    for (const std::size_t s : {1000, 4000, 16000}) {
        CAPTURE(s);
        const auto mc = sfr::score_sample(d, config(s, 5));
        CHECK((mc.scores - exact.scores).cwiseAbs().maxCoeff() <= 5.0 / std::sqrt(static_cast<double>(s)));
    }
}

TEST_CASE("averaging by iteration count") {
    const auto d = testing::random_dataset(3, 30, 1, true);
    auto c = config(400);
    const auto per_obs = sfr::score_sample(d, c);
    c.averaging = sfr::OobAveraging::Iterations;
    const auto per_iter = sfr::score_sample(d, c);
    for (Eigen::Index i = 0; i < per_obs.expected_losses.size(); ++i) {
        const double ratio = static_cast<double>(per_obs.oob_counts[static_cast<std::size_t>(i)]) /
                             static_cast<double>(per_obs.effective_iterations);
        CHECK(per_iter.expected_losses(i) == doctest::Approx(per_obs.expected_losses(i) * ratio).epsilon(1e-12));
    }
}

TEST_CASE("scoring errors") {
    const auto d = testing::random_dataset(4, 40, 1, true);
    auto expect = [](auto&& fn, sfr::ErrorCode code) {
        try {
            fn();
            FAIL("expected an error");
        } catch (const sfr::Error& e) {
            CHECK(e.code() == code);
        }
    };
    SUBCASE("a single iteration leaves in-bag rows unscored") {
        expect([&] { (void)sfr::score_sample(d, config(1)); }, sfr::ErrorCode::NeverOutOfBag);
    }
    SUBCASE("sub-sample size outside [k, N-1]") {
        auto c = config(50);
        c.subsample_size = 1;
        expect([&] { (void)sfr::score_sample(d, c); }, sfr::ErrorCode::InvalidArgument);
        c.subsample_size = 40;
        expect([&] { (void)sfr::score_sample(d, c); }, sfr::ErrorCode::InvalidArgument);
    }
    SUBCASE("exhaustive enumeration is bounded") {
        const auto big = testing::random_dataset(4, 400, 2, true);
        expect([&] { (void)sfr::score_sample_exhaustive(big, config(0)); }, sfr::ErrorCode::TooManySubsamples);
    }
    SUBCASE("every draw is degenerate") {
        const std::vector<double> y{1, 2, 3, 4, 5};
        const std::vector<double> x{1, 1, 1, 1, 1};
        Eigen::MatrixXd xx(5, 1);
        xx << 1, 1, 1, 1, 1;
        const sfr::Dataset flat(Eigen::Map<const Eigen::VectorXd>(y.data(), 5), xx, {"x"}, false);
        // Without an intercept a constant column is fine; add one to make it singular.
        Eigen::MatrixXd two(5, 2);
        two << 1, 2, 1, 2, 1, 2, 1, 2, 1, 2;
        const sfr::Dataset singular(Eigen::Map<const Eigen::VectorXd>(y.data(), 5), two, {"a", "b"}, false);
        auto c = config(20);
        c.max_redraws_per_iteration = 3;
        expect([&] { (void)sfr::score_sample(singular, c); }, sfr::ErrorCode::AllIterationsDegenerate);
        CHECK_NOTHROW((void)sfr::score_sample(flat, c));
    }
}

TEST_CASE("scores CSV") {
    auto c = config(0);
    c.subsample_size = 2;
    const auto r = sfr::score_sample_exhaustive(testing::line_with_outlier(), c);
    std::ostringstream out;
    sfr::write_scores_csv(out, r);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "row_index,expected_loss,score,oob_count");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 6);
    CHECK(out.str().find("\n5,8,0,10\n") != std::string::npos);
}
