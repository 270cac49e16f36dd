#pragma once

#include "sfr/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>

namespace sfr {

/// Pivots smaller than this fraction of the largest pivot count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct LinearFit {
    Eigen::VectorXd coefficients;   ///< [intercept, features...]
    Eigen::VectorXd residuals;      ///< y - fitted_values
    Eigen::VectorXd fitted_values;  ///< design * coefficients
    bool rank_ok = true;
};

/// Ordinary least squares via column-pivoted Householder QR.
/// Throws Error(RankDeficient) when the design is singular beyond kRankTolerance.
[[nodiscard]] LinearFit fit_ols(const Dataset& data);

/// Weighted least squares minimizing sum_i w_i (y_i - x_i'b)^2.
/// Throws Error(InvalidArgument) for negative, non-finite or mis-sized
/// weights, Error(DegenerateWeights) when fewer than k weights are positive,
/// and Error(RankDeficient) as fit_ols.
[[nodiscard]] LinearFit fit_wls(const Dataset& data, const Eigen::VectorXd& weights);

/// Matrix-level solvers for callers that work on row subsets which are too
/// small to form a Dataset (minimal sub-samples, consensus sets, annealed
/// samples).
[[nodiscard]] Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y);
[[nodiscard]] Eigen::VectorXd solve_weighted_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                                           const Eigen::VectorXd& weights);

/// Reusable QR workspace for hot loops that solve many same-shaped systems.
class SubsetSolver {
public:
    explicit SubsetSolver(Eigen::Index rows, Eigen::Index cols);

    /// Solves least squares on the given rows of (design, y). Returns false
    /// instead of throwing when the selected rows are rank deficient.
    [[nodiscard]] bool solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                             std::span<const std::size_t> rows, Eigen::VectorXd& coefficients);

private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd b_;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

}  // namespace sfr
