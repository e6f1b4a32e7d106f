#include "regemp/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "regemp/diagnostics.hpp"
#include "regemp/errors.hpp"
#include "regemp/solver.hpp"

namespace regemp {

const char* to_string(Method method) {
  switch (method) {
    case Method::LSDV: return "LSDV";
    case Method::FD: return "FD";
    case Method::RE: return "RE";
  }
  return "?";
}

const Coefficient* EstimationResult::find(const std::string& symbol) const {
  for (const auto& [name, coefficient] : coefficients)
    if (name == symbol) return &coefficient;
  return nullptr;
}

namespace {

/// Fills the coefficient table and the slope block from a solve.
void harvest(EstimationResult& result, const LsqSolution& solution,
             const std::vector<ColumnInfo>& columns) {
  std::vector<int> slope_cols;  // positions within solution.retained
  for (std::size_t k = 0; k < solution.retained.size(); ++k) {
    const ColumnInfo& info = columns[solution.retained[k]];
    Coefficient c;
    c.estimate = solution.beta(solution.retained[k]);
    const double var = solution.cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    c.std_error = var > 0.0 ? std::sqrt(var) : 0.0;
    c.t_stat = c.std_error > 0.0 ? c.estimate / c.std_error : 0.0;
    result.coefficients.emplace_back(info.symbol, c);
    if (!info.is_dummy && info.symbol != "const") {
      result.slope_symbols.push_back(info.symbol);
      slope_cols.push_back(static_cast<int>(k));
    }
  }
  for (int j : solution.dropped_columns) result.dropped.push_back(columns[j].symbol);

  const int k = static_cast<int>(slope_cols.size());
  result.slope_cov.resize(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) result.slope_cov(a, b) = solution.cov(slope_cols[a], slope_cols[b]);
}

std::vector<std::string> selected_regressors(const ModelSpec& spec) {
  std::vector<std::string> names;
  for (const char* canonical : {"x1", "x2", "x3", "x4", "x5"})
    if (std::find(spec.regressors.begin(), spec.regressors.end(), canonical) !=
        spec.regressors.end())
      names.push_back(canonical);
  for (const auto& name : spec.extra_regressors) names.push_back(name);
  return names;
}

}  // namespace

EstimationResult estimate_lsdv(const DesignMatrix& design, const ModelSpec& spec) {
  if (spec.dummies == ModelSpec::Dummies::All) {
    bool any_dummy = std::any_of(design.columns.begin(), design.columns.end(),
                                 [](const ColumnInfo& c) { return c.is_dummy; });
    if (!any_dummy)
      throw Error(ErrorKind::ConfigError, "LSDV design carries no dummy columns");
  }

  LsqSolution solution = solve_ols(design.X, design.y);

  EstimationResult result;
  result.method = Method::LSDV;
  result.n_obs = solution.n;
  harvest(result, solution, design.columns);
  result.r2_adjusted = adjusted_r2(solution.residuals, design.y, solution.p);
  result.durbin_watson = durbin_watson_panel(solution.residuals, design.unit_index);
  for (const auto& w : design.warnings) result.notes.push_back(w);
  return result;
}

EstimationResult estimate_fd(const FeatureTable& table, const ModelSpec& spec) {
  const auto names = selected_regressors(spec);
  const auto& rows = table.rows;
  if (rows.empty()) throw Error(ErrorKind::InsufficientConsecutiveYears, "no feature rows");

  // Rows arrive sorted by (region, industry, year); difference adjacent
  // years within each unit.
  std::vector<int> diff_row_a, diff_row_b, diff_unit;
  int unit = -1;
  int unit_diffs = 0;
  auto flush_unit = [&](std::size_t at) {
    if (unit >= 0 && unit_diffs == 0)
      throw Error(ErrorKind::InsufficientConsecutiveYears,
                  "unit (" + rows[at - 1].region + ", " + rows[at - 1].industry +
                      ") has no consecutive years");
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool new_unit = i == 0 || rows[i].region != rows[i - 1].region ||
                          rows[i].industry != rows[i - 1].industry;
    if (new_unit) {
      flush_unit(i);
      ++unit;
      unit_diffs = 0;
    } else if (rows[i].year == rows[i - 1].year + 1) {
      diff_row_a.push_back(static_cast<int>(i - 1));
      diff_row_b.push_back(static_cast<int>(i));
      diff_unit.push_back(unit);
      ++unit_diffs;
    }
  }
  flush_unit(rows.size());

  const int n = static_cast<int>(diff_row_b.size());
  const int k = static_cast<int>(names.size());
  const int p = k + (spec.fd_intercept ? 1 : 0);

  std::vector<ColumnInfo> columns;
  if (spec.fd_intercept) columns.push_back({"const", false, -1});
  for (const auto& name : names) columns.push_back({name, false, -1});

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const FeatureRow& b = rows[diff_row_b[i]];
    const FeatureRow& a = rows[diff_row_a[i]];
    y(i) = b.dep - a.dep;
    int c = 0;
    if (spec.fd_intercept) X(i, c++) = 1.0;
    for (const auto& name : names) X(i, c++) = b.regressor(name) - a.regressor(name);
  }

  LsqSolution solution = solve_ols(X, y);

  EstimationResult result;
  result.method = Method::FD;
  result.n_obs = n;
  harvest(result, solution, columns);
  result.r2_adjusted = adjusted_r2(solution.residuals, y, solution.p);
  result.durbin_watson = durbin_watson_panel(solution.residuals, diff_unit);
  result.notes.push_back(std::string("differences taken on dep_mode=") + to_string(spec.dep_mode));
  return result;
}

EstimationResult estimate_re(const DesignMatrix& design, const ModelSpec& spec,
                             const REOptions& options) {
  (void)spec;
  if (!design.has_intercept || design.columns.empty() || design.columns[0].symbol != "const")
    throw Error(ErrorKind::ConfigError, "random effects needs a leading constant column");
  for (const auto& column : design.columns)
    if (column.is_dummy)
      throw Error(ErrorKind::ConfigError, "random effects design must not carry dummies");

  const int n = static_cast<int>(design.X.rows());
  const int p_total = static_cast<int>(design.X.cols());
  const int n_units = design.n_units();
  std::vector<int> unit_count(n_units, 0);
  for (int u : design.unit_index) ++unit_count[u];
  for (int u = 0; u < n_units; ++u) {
    if (unit_count[u] == 0) throw Error(ErrorKind::EmptyUnit, "unit " + std::to_string(u));
    if (unit_count[u] != unit_count[0])
      throw Error(ErrorKind::ConfigError, "random effects requires a balanced panel");
  }
  const int periods = unit_count[0];

  EstimationResult result;
  result.method = Method::RE;
  result.n_obs = n;

  double theta = 0.0;
  VarianceComponents components;
  if (options.forced_theta) {
    theta = *options.forced_theta;
    components.theta = theta;
    result.notes.push_back("theta forced to " + std::to_string(theta));
  } else {
    // Within step: slopes only, full demeaning.
    Eigen::MatrixXd slopes = design.X.rightCols(p_total - 1);
    Eigen::MatrixXd slopes_within = quasi_demean(slopes, design.unit_index, 1.0);
    Eigen::MatrixXd y_within = quasi_demean(design.y, design.unit_index, 1.0);
    LsqSolution within = solve_ols(slopes_within, y_within.col(0));
    const int dof_within = n - n_units - within.p;
    if (dof_within <= 0)
      throw Error(ErrorKind::DegreesOfFreedomExhausted, "within regression has no dof");
    components.sigma2_e = within.residuals.squaredNorm() / dof_within;

    // Between step: regression on unit means, constant included.
    Eigen::MatrixXd unit_means = Eigen::MatrixXd::Zero(n_units, p_total);
    Eigen::VectorXd y_means = Eigen::VectorXd::Zero(n_units);
    for (int i = 0; i < n; ++i) {
      unit_means.row(design.unit_index[i]) += design.X.row(i);
      y_means(design.unit_index[i]) += design.y(i);
    }
    unit_means /= static_cast<double>(periods);
    y_means /= static_cast<double>(periods);
    LsqSolution between = solve_ols(unit_means, y_means);
    const int dof_between = n_units - between.p;
    if (dof_between <= 0)
      throw Error(ErrorKind::DegreesOfFreedomExhausted, "between regression has no dof");
    const double sigma2_between = between.residuals.squaredNorm() / dof_between;

    components.sigma2_u = sigma2_between - components.sigma2_e / periods;
    if (components.sigma2_u < 0.0) {
      components.sigma2_u = 0.0;
      result.notes.push_back("NegativeVarianceTruncated: between variance below within/T");
    }
    theta = 1.0 - std::sqrt(components.sigma2_e /
                            (periods * components.sigma2_u + components.sigma2_e));
    theta = std::clamp(theta, 0.0, 1.0);
    components.theta = theta;
  }

  LsqSolution gls = solve_gls_transformed(design.X, design.y, design.unit_index, theta);
  harvest(result, gls, design.columns);
  result.variance_components = components;

  // Diagnostics on original-scale residuals so the fit statistics describe
  // the untransformed dependent variable.
  Eigen::VectorXd residuals = design.y - design.X * gls.beta;
  result.r2_adjusted = adjusted_r2(residuals, design.y, gls.p);
  result.durbin_watson = durbin_watson_panel(residuals, design.unit_index);
  result.notes.push_back("fit statistics computed on original-scale residuals");
  return result;
}

}  // namespace regemp
