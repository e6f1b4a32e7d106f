#include "regemp/model_spec.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "regemp/errors.hpp"

namespace regemp {

using json = nlohmann::json;

const char* to_string(FlowMode mode) {
  return mode == FlowMode::Lagged ? "lagged" : "static";
}
const char* to_string(OmegaWeights weights) {
  return weights == OmegaWeights::EmploymentShare ? "employment_share" : "uniform";
}
const char* to_string(DepMode mode) {
  return mode == DepMode::DeltaLn ? "delta_ln" : "level_ln";
}

namespace {

FlowMode parse_flow_mode(const std::string& text) {
  if (text == "lagged") return FlowMode::Lagged;
  if (text == "static") return FlowMode::Static;
  throw Error(ErrorKind::ConfigError, "flow_mode must be 'lagged' or 'static', got '" + text + "'");
}

OmegaWeights parse_omega(const std::string& text) {
  if (text == "employment_share") return OmegaWeights::EmploymentShare;
  if (text == "uniform") return OmegaWeights::Uniform;
  throw Error(ErrorKind::ConfigError,
              "omega must be 'employment_share' or 'uniform', got '" + text + "'");
}

DepMode parse_dep_mode(const std::string& text) {
  if (text == "delta_ln") return DepMode::DeltaLn;
  if (text == "level_ln") return DepMode::LevelLn;
  throw Error(ErrorKind::ConfigError, "dep_mode must be 'delta_ln' or 'level_ln', got '" + text + "'");
}

}  // namespace

std::string ModelSpec::to_json_text() const {
  json doc;
  doc["regressors"] = regressors;
  doc["intercept"] = intercept;
  doc["dummies"] = dummies == Dummies::All ? "all" : "none";
  doc["dummy_exclusions"] = dummy_exclusions;
  doc["flow_mode"] = to_string(flow_mode);
  doc["omega"] = to_string(omega);
  doc["extra_regressors"] = extra_regressors;
  doc["dep_mode"] = to_string(dep_mode);
  doc["fd_intercept"] = fd_intercept;
  return doc.dump(2);
}

ModelSpec ModelSpec::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad model spec JSON: ") + e.what());
  }
  ModelSpec spec;
  try {
    if (doc.contains("regressors")) spec.regressors = doc["regressors"].get<std::vector<std::string>>();
    if (doc.contains("intercept")) spec.intercept = doc["intercept"].get<bool>();
    if (doc.contains("dummies")) {
      std::string d = doc["dummies"].get<std::string>();
      if (d == "all") spec.dummies = Dummies::All;
      else if (d == "none") spec.dummies = Dummies::None;
      else throw Error(ErrorKind::ConfigError, "dummies must be 'all' or 'none', got '" + d + "'");
    }
    if (doc.contains("dummy_exclusions"))
      spec.dummy_exclusions = doc["dummy_exclusions"].get<std::vector<std::string>>();
    if (doc.contains("flow_mode")) spec.flow_mode = parse_flow_mode(doc["flow_mode"].get<std::string>());
    if (doc.contains("omega")) spec.omega = parse_omega(doc["omega"].get<std::string>());
    if (doc.contains("extra_regressors"))
      spec.extra_regressors = doc["extra_regressors"].get<std::vector<std::string>>();
    if (doc.contains("dep_mode")) spec.dep_mode = parse_dep_mode(doc["dep_mode"].get<std::string>());
    if (doc.contains("fd_intercept")) spec.fd_intercept = doc["fd_intercept"].get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad model spec field: ") + e.what());
  }
  for (const auto& name : spec.regressors)
    if (name != "x1" && name != "x2" && name != "x3" && name != "x4" && name != "x5")
      throw Error(ErrorKind::ConfigError, "unknown regressor '" + name + "'");
  return spec;
}

ModelSpec ModelSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open model spec " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace regemp
