#pragma once

#include <string>
#include <vector>

namespace regemp {

enum class FlowMode { Lagged, Static };
enum class OmegaWeights { EmploymentShare, Uniform };
enum class DepMode { DeltaLn, LevelLn };

/// Declarative description of one estimation run: which regressors enter,
/// whether a constant or unit dummies are present, and how the transport
/// term is built. Serialized as JSON, e.g.
///   { "regressors": ["x1","x2","x3","x4","x5"], "intercept": false,
///     "dummies": "all", "dummy_exclusions": ["D5","D26"],
///     "flow_mode": "lagged", "omega": "employment_share",
///     "extra_regressors": [] }
struct ModelSpec {
  std::vector<std::string> regressors = {"x1", "x2", "x3", "x4", "x5"};
  bool intercept = false;
  enum class Dummies { All, None };
  Dummies dummies = Dummies::All;
  std::vector<std::string> dummy_exclusions;
  FlowMode flow_mode = FlowMode::Lagged;
  OmegaWeights omega = OmegaWeights::EmploymentShare;
  std::vector<std::string> extra_regressors;
  DepMode dep_mode = DepMode::DeltaLn;       // see README on the growth-rate caveat
  bool fd_intercept = false;                 // first differences drop the constant by default

  std::string to_json_text() const;
  static ModelSpec from_json_text(const std::string& text);
  static ModelSpec from_json_file(const std::string& path);
};

const char* to_string(FlowMode mode);
const char* to_string(OmegaWeights weights);
const char* to_string(DepMode mode);

}  // namespace regemp
