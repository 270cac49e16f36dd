#pragma once

#include "sfr/data_io.hpp"
#include "sfr/dataset.hpp"
#include "sfr/random.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(SFR_TEST_DATA_DIR) + "/" + name; }

inline sfr::Dataset boston(bool intercept = true) {
    sfr::CsvSchema schema;
    schema.outcome_column = "crim";
    schema.feature_columns = {"lstat"};
    return sfr::load_csv(data_path("boston.csv"), schema, intercept).dataset;
}

inline sfr::Dataset labor() {
    sfr::CsvSchema schema;
    schema.outcome_column = "earnings";
    schema.feature_columns = {"treatment"};
    return sfr::load_csv(data_path("labor.csv"), schema, true).dataset;
}

/// Random linear-model data: p Gaussian features, y = X b + noise.
inline sfr::Dataset random_dataset(std::uint64_t seed, std::size_t n, std::size_t p, bool intercept) {
    sfr::Rng rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double yi = intercept ? 0.5 : 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            x(i, j) = z(rng);
            yi += (1.0 + static_cast<double>(j)) * x(i, j);
        }
        y(i) = yi + z(rng);
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j));
    return sfr::Dataset(std::move(y), std::move(x), std::move(names), intercept);
}

/// Points on y = x for x = 0..4 plus the outlier (2, 10).
inline sfr::Dataset line_with_outlier() {
    const std::vector<double> x{0, 1, 2, 3, 4, 2};
    const std::vector<double> y{0, 1, 2, 3, 4, 10};
    return sfr::make_dataset(y, x, true);
}

}  // namespace testing
