#include "test_helpers.hpp"

#include "sfr/baselines.hpp"
#include "sfr/error.hpp"
#include "sfr/linear_model.hpp"

#include <doctest.h>

#include <cmath>

TEST_CASE("huber rho") {
    CHECK(sfr::huber_rho(0.5, 1.345) == doctest::Approx(0.125));
    CHECK(sfr::huber_rho(-3.0, 1.0) == doctest::Approx(2.5));
    CHECK(sfr::huber_rho(1.345, 1.345) == doctest::Approx(1.345 * 1.345 / 2));
}

TEST_CASE("median absolute deviation") {
    Eigen::VectorXd v(5);
    v << 1, 2, 3, 4, 100;
    CHECK(sfr::median_absolute_deviation(v) == 1.0);
    Eigen::VectorXd w(4);
    w << 1, 2, 3, 4;
    CHECK(sfr::median_absolute_deviation(w) == 1.0);
}

TEST_CASE("huber with a huge tuning constant is OLS") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = testing::random_dataset(seed, 40, 2, true);
        sfr::HuberConfig c;
        c.tuning_constant = 1e6;
        const auto h = sfr::fit_huber(d, c);
        const auto o = sfr::fit_ols(d);
        CHECK((h.fit.coefficients - o.coefficients).cwiseAbs().maxCoeff() < 1e-6);
        CHECK(h.converged);
    }
}

TEST_CASE("huber objective never increases at a fixed scale") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CAPTURE(seed);
        auto d = testing::random_dataset(seed, 50, 1, true);
        Eigen::VectorXd y = d.y();
        for (Eigen::Index i = 0; i < 5; ++i) y(i) += 15.0;
        d = d.with_outcome(y);
        sfr::HuberConfig c;
        c.scale = sfr::HuberScale::Fixed;
        c.fixed_scale = 1.0;
        const auto h = sfr::fit_huber(d, c);
        REQUIRE(h.objective_trace.size() >= 2);
        for (std::size_t i = 1; i < h.objective_trace.size(); ++i) {
            CHECK(h.objective_trace[i] <= h.objective_trace[i - 1] * (1.0 + 1e-12) + 1e-12);
        }
        CHECK(h.converged);
        CHECK(h.scale == 1.0);
    }
}

TEST_CASE("huber resists a vertical outlier") {
    std::vector<double> x, y;
    for (int i = 0; i < 30; ++i) {
        x.push_back(i);
        y.push_back(i + 0.1 * ((i * 7) % 5 - 2));
    }
    y[29] = 500.0;
    const auto d = sfr::make_dataset(y, x, true);
    const auto h = sfr::fit_huber(d);
    const auto o = sfr::fit_ols(d);
    CHECK(std::abs(h.fit.coefficients(1) - 1.0) < 0.1 * std::abs(o.coefficients(1) - 1.0));
}

TEST_CASE("huber on a perfect line") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    const std::vector<double> y{1, 3, 5, 7, 9};
    const auto h = sfr::fit_huber(sfr::make_dataset(y, x, true));
    CHECK(h.converged);
    CHECK(h.iterations == 0);
    CHECK(h.fit.coefficients(1) == doctest::Approx(2.0));
}

TEST_CASE("huber argument errors") {
    const auto d = testing::random_dataset(0, 20, 1, true);
    sfr::HuberConfig c;
    c.tuning_constant = 0.0;
    CHECK_THROWS_AS((void)sfr::fit_huber(d, c), sfr::Error);
}

TEST_CASE("ransac ignores a single gross outlier") {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(i);
        y.push_back(2.0 * i + 1.0);
    }
    x.push_back(4.5);
    y.push_back(40.0);
    const auto d = sfr::make_dataset(y, x, true);
    const auto r = sfr::fit_ransac(d);
    CHECK(r.fit.coefficients(0) == doctest::Approx(1.0));
    CHECK(r.fit.coefficients(1) == doctest::Approx(2.0));
    CHECK(r.inlier_count == 10);
    CHECK_FALSE(r.inlier_mask[10]);
    CHECK(r.trials_run == 100);
}

TEST_CASE("ransac mask matches the winning trial") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        CAPTURE(seed);
        const auto d = testing::random_dataset(seed, 80, 1, true);
        sfr::RansacConfig c;
        c.seed = seed;
        const auto r = sfr::fit_ransac(d, c);
        const Eigen::VectorXd res = d.y() - d.design() * r.trial_coefficients;
        std::size_t count = 0;
        for (Eigen::Index i = 0; i < res.size(); ++i) {
            const bool in = std::abs(res(i)) <= r.threshold;
            CHECK(in == r.inlier_mask[static_cast<std::size_t>(i)]);
            count += in ? 1 : 0;
        }
        CHECK(count == r.inlier_count);
        CHECK(r.threshold == doctest::Approx(sfr::median_absolute_deviation(sfr::fit_ols(d).residuals)));

        // Refit on the consensus set.
        std::vector<bool> out(d.n());
        for (std::size_t i = 0; i < d.n(); ++i) out[i] = !r.inlier_mask[i];
        const auto refit = sfr::fit_ols(d.without(out));
        CHECK((refit.coefficients - r.fit.coefficients).cwiseAbs().maxCoeff() < 1e-10);

        // Deterministic for a seed, independent of workers.
        c.threads = 3;
        const auto again = sfr::fit_ransac(d, c);
        CHECK(again.best_trial == r.best_trial);
        CHECK(again.fit.coefficients == r.fit.coefficients);
    }
}

TEST_CASE("ransac early stop") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5, 6, 7};
    const std::vector<double> y{0, 1, 2, 3, 4, 5, 6, 7};
    sfr::RansacConfig c;
    c.residual_threshold = 0.5;
    c.stop_inlier_fraction = 0.9;
    const auto r = sfr::fit_ransac(sfr::make_dataset(y, x, true), c);
    CHECK(r.trials_run == 1);
    CHECK(r.inlier_count == 8);
}

TEST_CASE("ransac without consensus") {
    const auto d = testing::random_dataset(3, 30, 1, true);
    sfr::RansacConfig c;
    c.residual_threshold = 1e-12;
    try {
        (void)sfr::fit_ransac(d, c);
        FAIL("expected NoConsensus");
    } catch (const sfr::Error& e) {
        CHECK(e.code() == sfr::ErrorCode::NoConsensus);
    }
}
