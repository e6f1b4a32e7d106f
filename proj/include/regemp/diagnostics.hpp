#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "regemp/estimators.hpp"

namespace regemp {

/// 1 - [SSR/(n-p)] / [SST/(n-1)] with SST about the mean of y.
double adjusted_r2(const Eigen::VectorXd& residuals, const Eigen::VectorXd& y, int p);

/// Panel Durbin-Watson: squared first differences of residuals within each
/// unit over the total squared residuals. Rows must be grouped by unit,
/// ascending in time; unit boundaries contribute nothing to the numerator.
double durbin_watson_panel(const Eigen::VectorXd& residuals, const std::vector<int>& unit_index);

struct HausmanResult {
  double statistic = 0.0;
  int dof = 0;
  std::vector<std::string> comparison;
  bool psd_corrected = false;  // covariance difference needed eigenvalue clipping
};

/// Chi-square contrast of fixed- and random-effects slopes:
/// (b_FE - b_RE)' [V_FE - V_RE]^{-1} (b_FE - b_RE) over `symbols`.
/// An indefinite covariance difference has its eigenvalues clipped at
/// 1e-12 times the largest one, flagged via psd_corrected.
HausmanResult hausman_test(const EstimationResult& fe, const EstimationResult& re,
                           const std::vector<std::string>& symbols);

/// Upper 5% chi-square quantile (tabulated for dof 1..10, Wilson-Hilferty
/// beyond).
double chi_square_critical_95(int dof);

}  // namespace regemp
