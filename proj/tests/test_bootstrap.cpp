#include "test_helpers.hpp"

#include "sfr/bootstrap.hpp"
#include "sfr/error.hpp"
#include "sfr/linear_model.hpp"
#include "sfr/stats.hpp"

#include <doctest.h>

#include <cmath>

namespace {

Eigen::VectorXd ols_estimator(const sfr::Dataset& d, std::uint64_t /*seed*/) { return sfr::fit_ols(d).coefficients; }

}  // namespace

TEST_CASE("constant estimator has zero spread") {
    const auto d = testing::random_dataset(5, 30, 1, true);
    const sfr::Estimator constant = [](const sfr::Dataset&, std::uint64_t) {
        return Eigen::VectorXd::Constant(1, 3.0);
    };
    for (const auto ci : {sfr::CiMethod::Normal, sfr::CiMethod::Percentile}) {
        sfr::BootstrapOptions opt;
        opt.replications = 50;
        opt.ci = ci;
        const auto r = sfr::pairs_bootstrap(d, constant, opt);
        CHECK(r.b_effective == 50);
        CHECK(r.standard_errors(0) == 0.0);
        CHECK(r.ci_lower(0) == 3.0);
        CHECK(r.ci_upper(0) == 3.0);
    }
}

TEST_CASE("normal interval arithmetic") {
    // Replicates with sample SD exactly 0.0427 around a point of 0.4315.
    Eigen::MatrixXd draws(2, 1);
    const double half = 0.0427 / std::sqrt(2.0);
    draws << 0.4315 - half, 0.4315 + half;
    Eigen::VectorXd point(1);
    point << 0.4315;
    Eigen::VectorXd se, lo, hi;
    sfr::summarize_replicates(draws, point, sfr::CiMethod::Normal, se, lo, hi);
    CHECK(se(0) == doctest::Approx(0.0427).epsilon(1e-12));
    CHECK(lo(0) == doctest::Approx(0.3478).epsilon(1e-4));
    CHECK(hi(0) == doctest::Approx(0.5152).epsilon(1e-4));
    CHECK(hi(0) - point(0) == doctest::Approx(point(0) - lo(0)));
}

TEST_CASE("percentile interval uses interpolated quantiles") {
    Eigen::MatrixXd draws(5, 1);
    draws << 4, 0, 3, 1, 2;
    Eigen::VectorXd point = Eigen::VectorXd::Constant(1, 2.0);
    Eigen::VectorXd se, lo, hi;
    sfr::summarize_replicates(draws, point, sfr::CiMethod::Percentile, se, lo, hi);
    CHECK(lo(0) == doctest::Approx(0.1));
    CHECK(hi(0) == doctest::Approx(3.9));
    CHECK(se(0) == doctest::Approx(std::sqrt(2.5)));
}

TEST_CASE("bootstrap is deterministic across thread counts") {
    const auto d = testing::random_dataset(11, 60, 2, true);
    sfr::BootstrapOptions opt;
    opt.replications = 64;
    opt.seed = 9;
    opt.threads = 1;
    const auto a = sfr::pairs_bootstrap(d, ols_estimator, opt);
    opt.threads = 4;
    const auto b = sfr::pairs_bootstrap(d, ols_estimator, opt);
    CHECK(a.replicate_estimates == b.replicate_estimates);
    CHECK(a.standard_errors == b.standard_errors);
    CHECK(a.point_estimate == sfr::fit_ols(d).coefficients);
    opt.seed = 10;
    const auto c = sfr::pairs_bootstrap(d, ols_estimator, opt);
    CHECK(a.replicate_estimates != c.replicate_estimates);
    CHECK((a.standard_errors.array() > 0.0).all());
}

TEST_CASE("failing replicates") {
    const auto d = testing::random_dataset(2, 20, 1, true);
    sfr::BootstrapOptions opt;
    opt.replications = 20;
    SUBCASE("too many degenerate replicates") {
        const sfr::Estimator flaky = [](const sfr::Dataset&, std::uint64_t seed) -> Eigen::VectorXd {
            if (seed != sfr::point_estimate_seed(42)) throw sfr::Error(sfr::ErrorCode::RankDeficient, "forced");
            return Eigen::VectorXd::Zero(1);
        };
        try {
            (void)sfr::pairs_bootstrap(d, flaky, opt);
            FAIL("expected TooManyFailures");
        } catch (const sfr::Error& e) {
            CHECK(e.code() == sfr::ErrorCode::TooManyFailures);
        }
    }
    SUBCASE("too few replications") {
        opt.replications = 1;
        CHECK_THROWS_AS((void)sfr::pairs_bootstrap(d, ols_estimator, opt), sfr::Error);
    }
    SUBCASE("a minority of failures is dropped") {
        const sfr::Estimator some = [](const sfr::Dataset&, std::uint64_t seed) -> Eigen::VectorXd {
            if (seed != sfr::point_estimate_seed(42) && seed % 5 == 0) {
                throw sfr::Error(sfr::ErrorCode::RankDeficient, "forced");
            }
            return Eigen::VectorXd::Ones(1);
        };
        opt.threads = 1;
        const auto r = sfr::pairs_bootstrap(d, some, opt);
        CHECK(r.b_effective < 20);
        CHECK(r.b_effective >= 10);
        CHECK(static_cast<std::size_t>(r.replicate_estimates.rows()) == r.b_effective);
    }
}
