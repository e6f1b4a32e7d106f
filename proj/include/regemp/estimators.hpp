#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "regemp/features.hpp"
#include "regemp/model_spec.hpp"

namespace regemp {

enum class Method { LSDV, FD, RE };
const char* to_string(Method method);

struct Coefficient {
  double estimate = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;  // estimate / std_error when std_error > 0
};

struct VarianceComponents {
  double sigma2_u = 0.0;  // unit-effect variance
  double sigma2_e = 0.0;  // idiosyncratic variance
  double theta = 0.0;     // quasi-demeaning fraction
};

struct EstimationResult {
  Method method = Method::LSDV;
  std::vector<std::pair<std::string, Coefficient>> coefficients;  // report order
  double r2_adjusted = 0.0;
  double durbin_watson = 0.0;
  int n_obs = 0;
  std::optional<VarianceComponents> variance_components;  // RE only

  // Slope block kept for the Hausman comparison: non-dummy, non-constant
  // coefficients and their joint covariance, aligned with slope_symbols.
  std::vector<std::string> slope_symbols;
  Eigen::MatrixXd slope_cov;

  std::vector<std::string> dropped;  // symbols removed by rank detection
  std::vector<std::string> notes;

  const Coefficient* find(const std::string& symbol) const;
};

/// Fixed effects by least squares dummy variables: plain OLS on a design
/// that carries the unit dummies. Adjusted R2 counts every retained dummy
/// as a parameter; Durbin-Watson runs within units.
EstimationResult estimate_lsdv(const DesignMatrix& design, const ModelSpec& spec);

/// First differences within each unit across consecutive years. The
/// intercept is excluded unless spec.fd_intercept asks for the
/// common-trend interpretation.
EstimationResult estimate_fd(const FeatureTable& table, const ModelSpec& spec);

struct REOptions {
  std::optional<double> forced_theta;  // bypass variance components (tests)
};

/// Random-effects GLS with Swamy-Arora variance components: sigma2_e from
/// the within regression, sigma2_u from the between regression (truncated
/// at zero), then OLS on theta-quasi-demeaned data. The design must carry
/// a constant and no dummies.
EstimationResult estimate_re(const DesignMatrix& design, const ModelSpec& spec,
                             const REOptions& options = {});

}  // namespace regemp
