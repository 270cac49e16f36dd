#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sfr {

/// Outcome vector plus feature matrix. Immutable after construction.
///
/// The design matrix used by every estimator is the feature matrix with a
/// leading column of ones when `add_intercept` is set; coefficient vectors
/// are therefore ordered [intercept, features...].
class Dataset {
public:
    /// Throws Error(InvalidDataset) when shapes disagree, when any value is
    /// non-finite, or when N < k + 2 (k = number of fitted coefficients).
    Dataset(Eigen::VectorXd y, Eigen::MatrixXd x, std::vector<std::string> feature_names,
            bool add_intercept, std::string outcome_name = "y");

    [[nodiscard]] const Eigen::VectorXd& y() const noexcept { return y_; }
    [[nodiscard]] const Eigen::MatrixXd& x() const noexcept { return x_; }
    [[nodiscard]] const Eigen::MatrixXd& design() const noexcept { return design_; }
    [[nodiscard]] const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] const std::string& outcome_name() const noexcept { return outcome_name_; }
    [[nodiscard]] bool add_intercept() const noexcept { return add_intercept_; }

    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(y_.size()); }
    [[nodiscard]] std::size_t p() const noexcept { return static_cast<std::size_t>(x_.cols()); }
    /// Number of fitted coefficients (p, or p + 1 with intercept).
    [[nodiscard]] std::size_t k() const noexcept { return static_cast<std::size_t>(design_.cols()); }

    /// Names in coefficient order; the intercept is called "const".
    [[nodiscard]] std::vector<std::string> coefficient_names() const;

    /// Rows selected by index, in the given order (repeats allowed).
    [[nodiscard]] Dataset subset(std::span<const std::size_t> rows) const;
    /// All rows whose mask entry is false.
    [[nodiscard]] Dataset without(const std::vector<bool>& drop) const;
    [[nodiscard]] Dataset with_outcome(Eigen::VectorXd y) const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd x_;
    Eigen::MatrixXd design_;
    std::vector<std::string> feature_names_;
    std::string outcome_name_;
    bool add_intercept_;
};

/// Single-feature convenience constructor.
[[nodiscard]] Dataset make_dataset(std::span<const double> y, std::span<const double> x, bool add_intercept,
                                   std::string feature_name = "x");

}  // namespace sfr
