#include "regemp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "regemp/errors.hpp"

namespace regemp {

double adjusted_r2(const Eigen::VectorXd& residuals, const Eigen::VectorXd& y, int p) {
  const int n = static_cast<int>(y.size());
  if (residuals.size() != n)
    throw Error(ErrorKind::ConfigError, "residual and dependent lengths differ");
  if (n <= p)
    throw Error(ErrorKind::DegreesOfFreedomExhausted,
                "n = " + std::to_string(n) + " <= p = " + std::to_string(p));
  if (n < 2) throw Error(ErrorKind::DegreesOfFreedomExhausted, "need at least 2 observations");

  const double ssr = residuals.squaredNorm();
  const double mean = y.mean();
  double sst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = y(i) - mean;
    sst += d * d;
  }
  if (sst == 0.0) return ssr == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - (ssr / (n - p)) / (sst / (n - 1));
}

double durbin_watson_panel(const Eigen::VectorXd& residuals, const std::vector<int>& unit_index) {
  const int n = static_cast<int>(residuals.size());
  if (n == 0) throw Error(ErrorKind::EmptyUnit, "no residuals");
  if (static_cast<int>(unit_index.size()) != n)
    throw Error(ErrorKind::ConfigError, "unit index length mismatch");

  std::set<int> finished;
  double numerator = 0.0;
  for (int i = 1; i < n; ++i) {
    if (unit_index[i] == unit_index[i - 1]) {
      const double d = residuals(i) - residuals(i - 1);
      numerator += d * d;
    } else {
      if (!finished.insert(unit_index[i - 1]).second || finished.count(unit_index[i]))
        throw Error(ErrorKind::ConfigError, "unit rows are not contiguous");
    }
  }
  const double denominator = residuals.squaredNorm();
  if (denominator == 0.0) return 0.0;
  return std::clamp(numerator / denominator, 0.0, 4.0);
}

HausmanResult hausman_test(const EstimationResult& fe, const EstimationResult& re,
                           const std::vector<std::string>& symbols) {
  const int k = static_cast<int>(symbols.size());
  if (k == 0) throw Error(ErrorKind::MissingSymbol, "no symbols to compare");

  auto slope_position = [](const EstimationResult& result, const std::string& symbol) {
    for (std::size_t i = 0; i < result.slope_symbols.size(); ++i)
      if (result.slope_symbols[i] == symbol) return static_cast<int>(i);
    throw Error(ErrorKind::MissingSymbol,
                "'" + symbol + "' absent from " + std::string(to_string(result.method)) +
                    " slope block");
  };

  Eigen::VectorXd diff(k);
  Eigen::MatrixXd v_fe(k, k), v_re(k, k);
  std::vector<int> fe_pos(k), re_pos(k);
  for (int i = 0; i < k; ++i) {
    fe_pos[i] = slope_position(fe, symbols[i]);
    re_pos[i] = slope_position(re, symbols[i]);
    const Coefficient* cf = fe.find(symbols[i]);
    const Coefficient* cr = re.find(symbols[i]);
    if (!cf || !cr) throw Error(ErrorKind::MissingSymbol, "'" + symbols[i] + "' missing");
    diff(i) = cf->estimate - cr->estimate;
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      v_fe(i, j) = fe.slope_cov(fe_pos[i], fe_pos[j]);
      v_re(i, j) = re.slope_cov(re_pos[i], re_pos[j]);
    }

  HausmanResult result;
  result.dof = k;
  result.comparison = symbols;
  if (diff.isZero(0.0)) return result;  // statistic 0 regardless of covariances

  Eigen::MatrixXd v = v_fe - v_re;
  v = 0.5 * (v + v.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(v);
  if (eigen.info() != Eigen::Success)
    throw Error(ErrorKind::SingularCovarianceDifference, "eigendecomposition failed");
  Eigen::VectorXd values = eigen.eigenvalues();
  const double largest = values.maxCoeff();
  if (!(largest > 0.0))
    throw Error(ErrorKind::SingularCovarianceDifference,
                "covariance difference has no positive direction");
  const double floor = 1e-12 * largest;
  for (int i = 0; i < k; ++i)
    if (values(i) < floor) {
      values(i) = floor;
      result.psd_corrected = true;
    }
  Eigen::VectorXd z = eigen.eigenvectors().transpose() * diff;
  double statistic = 0.0;
  for (int i = 0; i < k; ++i) statistic += z(i) * z(i) / values(i);
  result.statistic = statistic;
  return result;
}

double chi_square_critical_95(int dof) {
  static const double table[] = {3.8415,  5.9915,  7.8147,  9.4877,  11.0705,
                                 12.5916, 14.0671, 15.5073, 16.9190, 18.3070};
  if (dof >= 1 && dof <= 10) return table[dof - 1];
  if (dof < 1) throw Error(ErrorKind::ConfigError, "chi-square dof must be >= 1");
  // Wilson-Hilferty with the 95% normal quantile.
  const double z = 1.6448536269514722;
  const double k = static_cast<double>(dof);
  const double term = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * term * term * term;
}

}  // namespace regemp
