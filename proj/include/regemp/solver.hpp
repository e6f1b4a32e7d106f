#pragma once

#include <Eigen/Dense>
#include <vector>

namespace regemp {

/// Result of a least-squares solve. `beta` has one entry per original
/// column (zero for dropped columns); `cov` covers retained columns only,
/// in `retained` order, as sigma2 * (X'X)^{-1}.
///
/// An exactly determined system (n == p after drops) is allowed and yields
/// sigma2 = 0 with a zero covariance.
struct LsqSolution {
  Eigen::VectorXd beta;
  Eigen::MatrixXd cov;
  std::vector<int> retained;
  std::vector<int> dropped_columns;
  Eigen::VectorXd residuals;
  double sigma2 = 0.0;
  int n = 0;  // rows
  int p = 0;  // effective (retained) columns

  double std_error(int original_column) const;
  Eigen::VectorXd std_errors() const;  // aligned with beta; 0 for dropped
};

/// Minimizes ||y - X beta|| via Householder QR. Rank handling is
/// deterministic: columns are admitted left to right and a column whose
/// residual against the already-admitted basis falls below
/// tol * ||column|| is dropped, so collinearity always evicts the
/// later column. `tol <= 0` selects the default eps * max(n, p).
LsqSolution solve_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double tol = -1.0);

/// GLS as OLS on quasi-demeaned data: every column of X and y has
/// theta * (its unit mean) subtracted before the ordinary solve.
/// theta = 0 is pooled OLS, theta = 1 the within transformation.
LsqSolution solve_gls_transformed(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const std::vector<int>& unit_index, double theta,
                                  double tol = -1.0);

/// Subtracts theta times the per-unit mean from each row (helper shared by
/// the random-effects estimator and its tests).
Eigen::MatrixXd quasi_demean(const Eigen::MatrixXd& values, const std::vector<int>& unit_index,
                             double theta);

}  // namespace regemp
