#include "sfr/linear_model.hpp"

#include "sfr/error.hpp"

#include <cmath>
#include <string>

namespace sfr {
namespace {

Eigen::VectorXd solve_qr(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.rows(), a.cols());
    qr.setThreshold(kRankTolerance);
    qr.compute(a);
    if (qr.rank() < a.cols()) {
        throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                                                  " < " + std::to_string(a.cols()) + " columns)");
    }
    return qr.solve(b);
}

LinearFit make_fit(const Dataset& data, Eigen::VectorXd coefficients) {
    LinearFit fit;
    fit.fitted_values = data.design() * coefficients;
    fit.residuals = data.y() - fit.fitted_values;
    fit.coefficients = std::move(coefficients);
    return fit;
}

}  // namespace

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
    if (design.rows() < design.cols()) {
        throw Error(ErrorCode::RankDeficient, "fewer rows than coefficients");
    }
    return solve_qr(design, y);
}

Eigen::VectorXd solve_weighted_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& weights) {
    if (weights.size() != design.rows()) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(design.rows()) + " weights, got " +
                                                    std::to_string(weights.size()));
    }
    Eigen::Index positive = 0;
    for (const double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw Error(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
        }
        if (w > 0.0) ++positive;
    }
    if (positive < design.cols()) {
        throw Error(ErrorCode::DegenerateWeights, std::to_string(positive) + " positive weights for " +
                                                      std::to_string(design.cols()) + " coefficients");
    }
    const Eigen::ArrayXd root = weights.array().sqrt();
    const Eigen::MatrixXd a = design.array().colwise() * root;
    const Eigen::VectorXd b = (y.array() * root).matrix();
    return solve_qr(a, b);
}

LinearFit fit_ols(const Dataset& data) {
    return make_fit(data, solve_least_squares(data.design(), data.y()));
}

LinearFit fit_wls(const Dataset& data, const Eigen::VectorXd& weights) {
    return make_fit(data, solve_weighted_least_squares(data.design(), data.y(), weights));
}

SubsetSolver::SubsetSolver(Eigen::Index rows, Eigen::Index cols) : a_(rows, cols), b_(rows), qr_(rows, cols) {
    qr_.setThreshold(kRankTolerance);
}

bool SubsetSolver::solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, std::span<const std::size_t> rows,
                         Eigen::VectorXd& coefficients) {
    const auto m = static_cast<Eigen::Index>(rows.size());
    if (a_.rows() != m) {
        a_.resize(m, design.cols());
        b_.resize(m);
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto r = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]);
        a_.row(i) = design.row(r);
        b_(i) = y(r);
    }
    qr_.compute(a_);
    if (qr_.rank() < design.cols()) return false;
    coefficients = qr_.solve(b_);
    return true;
}

}  // namespace sfr
