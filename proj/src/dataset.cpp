#include "sfr/dataset.hpp"

#include "sfr/error.hpp"

#include <utility>

namespace sfr {

Dataset::Dataset(Eigen::VectorXd y, Eigen::MatrixXd x, std::vector<std::string> feature_names,
                 bool add_intercept, std::string outcome_name)
    : y_(std::move(y)),
      x_(std::move(x)),
      feature_names_(std::move(feature_names)),
      outcome_name_(std::move(outcome_name)),
      add_intercept_(add_intercept) {
    if (x_.rows() != y_.size()) {
        throw Error(ErrorCode::InvalidDataset, "feature matrix has " + std::to_string(x_.rows()) +
                                                   " rows but outcome has " + std::to_string(y_.size()));
    }
    if (x_.cols() == 0 && !add_intercept_) {
        throw Error(ErrorCode::InvalidDataset, "dataset has no features and no intercept");
    }
    if (static_cast<Eigen::Index>(feature_names_.size()) != x_.cols()) {
        throw Error(ErrorCode::InvalidDataset, "expected " + std::to_string(x_.cols()) + " feature names, got " +
                                                   std::to_string(feature_names_.size()));
    }
    if (!y_.allFinite() || !x_.allFinite()) {
        throw Error(ErrorCode::InvalidDataset, "dataset contains non-finite values");
    }
    const Eigen::Index cols = x_.cols() + (add_intercept_ ? 1 : 0);
    if (y_.size() < cols + 2) {
        throw Error(ErrorCode::InvalidDataset, "need at least " + std::to_string(cols + 2) +
                                                   " observations for " + std::to_string(cols) +
                                                   " coefficients, got " + std::to_string(y_.size()));
    }
    design_.resize(x_.rows(), cols);
    if (add_intercept_) {
        design_.col(0).setOnes();
        design_.rightCols(x_.cols()) = x_;
    } else {
        design_ = x_;
    }
}

std::vector<std::string> Dataset::coefficient_names() const {
    std::vector<std::string> names;
    names.reserve(k());
    if (add_intercept_) names.emplace_back("const");
    names.insert(names.end(), feature_names_.begin(), feature_names_.end());
    return names;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    const auto m = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd y(m);
    Eigen::MatrixXd x(m, x_.cols());
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]);
        y(i) = y_(r);
        x.row(i) = x_.row(r);
    }
    return Dataset(std::move(y), std::move(x), feature_names_, add_intercept_, outcome_name_);
}

Dataset Dataset::without(const std::vector<bool>& drop) const {
    std::vector<std::size_t> keep;
    keep.reserve(n());
    for (std::size_t i = 0; i < n(); ++i) {
        if (i >= drop.size() || !drop[i]) keep.push_back(i);
    }
    return subset(keep);
}

Dataset Dataset::with_outcome(Eigen::VectorXd y) const {
    return Dataset(std::move(y), x_, feature_names_, add_intercept_, outcome_name_);
}

Dataset make_dataset(std::span<const double> y, std::span<const double> x, bool add_intercept,
                     std::string feature_name) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::InvalidDataset, "outcome and feature lengths differ");
    }
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    Eigen::MatrixXd xm = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    return Dataset(std::move(yv), std::move(xm), {std::move(feature_name)}, add_intercept);
}

}  // namespace sfr
