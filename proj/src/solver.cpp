#include "regemp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regemp/errors.hpp"

namespace regemp {

double LsqSolution::std_error(int original_column) const {
  for (std::size_t k = 0; k < retained.size(); ++k)
    if (retained[k] == original_column) {
      double v = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
      return v > 0.0 ? std::sqrt(v) : 0.0;
    }
  return 0.0;
}

Eigen::VectorXd LsqSolution::std_errors() const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(beta.size());
  for (std::size_t k = 0; k < retained.size(); ++k) {
    double v = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    out(retained[k]) = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return out;
}

LsqSolution solve_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double tol) {
  const int n = static_cast<int>(X.rows());
  const int p_total = static_cast<int>(X.cols());
  if (n < 1) throw Error(ErrorKind::DegreesOfFreedomExhausted, "no rows");
  if (y.size() != n)
    throw Error(ErrorKind::ConfigError, "X has " + std::to_string(n) + " rows but y has " +
                                            std::to_string(y.size()));

  const double rank_tol =
      tol > 0.0 ? tol
                : std::numeric_limits<double>::epsilon() * std::max(n, p_total);

  // Left-to-right admission with re-orthogonalized Gram-Schmidt: a column
  // nearly inside the span of the admitted ones is dropped, never an
  // earlier column.
  Eigen::MatrixXd basis(n, std::min(n, p_total));
  int rank = 0;
  LsqSolution sol;
  for (int j = 0; j < p_total; ++j) {
    Eigen::VectorXd v = X.col(j);
    const double original_norm = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < rank; ++k) v -= basis.col(k).dot(v) * basis.col(k);
    if (rank >= n || v.norm() <= rank_tol * original_norm || original_norm == 0.0) {
      sol.dropped_columns.push_back(j);
    } else {
      basis.col(rank++) = v / v.norm();
      sol.retained.push_back(j);
    }
  }
  if (sol.retained.empty()) throw Error(ErrorKind::AllColumnsDropped, "design has rank zero");

  const int p = static_cast<int>(sol.retained.size());
  Eigen::MatrixXd Xr(n, p);
  for (int k = 0; k < p; ++k) Xr.col(k) = X.col(sol.retained[k]);

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Xr);
  Eigen::VectorXd beta_r = qr.solve(y);
  sol.residuals = y - Xr * beta_r;
  const double ssr = sol.residuals.squaredNorm();

  sol.n = n;
  sol.p = p;
  sol.sigma2 = n > p ? ssr / (n - p) : 0.0;

  Eigen::MatrixXd R = qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
  Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  sol.cov = sol.sigma2 * (Rinv * Rinv.transpose());
  sol.cov = 0.5 * (sol.cov + sol.cov.transpose()).eval();

  sol.beta = Eigen::VectorXd::Zero(p_total);
  for (int k = 0; k < p; ++k) sol.beta(sol.retained[k]) = beta_r(k);
  return sol;
}

Eigen::MatrixXd quasi_demean(const Eigen::MatrixXd& values, const std::vector<int>& unit_index,
                             double theta) {
  const int n = static_cast<int>(values.rows());
  if (static_cast<int>(unit_index.size()) != n)
    throw Error(ErrorKind::ConfigError, "unit index length mismatch");
  int n_units = 0;
  for (int u : unit_index) n_units = std::max(n_units, u + 1);

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(n_units, values.cols());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_units);
  for (int i = 0; i < n; ++i) {
    means.row(unit_index[i]) += values.row(i);
    counts(unit_index[i]) += 1.0;
  }
  for (int u = 0; u < n_units; ++u) {
    if (counts(u) == 0.0) throw Error(ErrorKind::EmptyUnit, "unit " + std::to_string(u));
    means.row(u) /= counts(u);
  }

  Eigen::MatrixXd out = values;
  for (int i = 0; i < n; ++i) out.row(i) -= theta * means.row(unit_index[i]);
  return out;
}

LsqSolution solve_gls_transformed(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                  const std::vector<int>& unit_index, double theta, double tol) {
  Eigen::MatrixXd Xt = quasi_demean(X, unit_index, theta);
  Eigen::MatrixXd yt = quasi_demean(y, unit_index, theta);
  return solve_ols(Xt, yt.col(0), tol);
}

}  // namespace regemp
