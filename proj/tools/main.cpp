#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "regemp/errors.hpp"
#include "regemp/model_spec.hpp"
#include "regemp/panel.hpp"
#include "regemp/report.hpp"
#include "regemp/synth.hpp"

namespace {

using namespace regemp;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + out_path);
  out << text;
}

std::vector<Method> parse_estimators(const std::string& list) {
  std::vector<Method> methods;
  std::string token;
  std::stringstream ss(list);
  while (std::getline(ss, token, ',')) {
    if (token == "lsdv") methods.push_back(Method::LSDV);
    else if (token == "fd") methods.push_back(Method::FD);
    else if (token == "re") methods.push_back(Method::RE);
    else throw Error(ErrorKind::ConfigError, "unknown estimator '" + token + "'");
  }
  if (methods.empty()) throw Error(ErrorKind::ConfigError, "at least one estimator required");
  return methods;
}

int cmd_estimate(const std::string& panel_path, const std::string& totals_path,
                 const std::string& schema_path, const std::string& spec_path,
                 const std::string& estimators, const std::string& format,
                 const std::string& out_path) {
  SchemaMapping schema;
  ModelSpec spec;
  PanelDataset dataset = [&] {
    try {
      if (!schema_path.empty()) schema = SchemaMapping::from_json_file(schema_path);
      if (!spec_path.empty()) spec = ModelSpec::from_json_file(spec_path);
      return load_panel(panel_path, totals_path, schema);
    } catch (const Error& e) {
      std::cerr << "regemp: " << e.what() << "\n";
      std::exit(1);
    }
  }();
  for (const auto& warning : dataset.warnings()) std::cerr << "regemp: warning: " << warning << "\n";

  try {
    ReportInput report = run_pipeline(dataset, spec, parse_estimators(estimators));
    std::string text;
    if (format == "text") text = render_text(report);
    else if (format == "csv") text = render_csv(report);
    else if (format == "json") text = render_json(report);
    else throw Error(ErrorKind::ConfigError, "format must be text, csv or json");
    write_output(text, out_path);
  } catch (const Error& e) {
    std::cerr << "regemp: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_prefix) {
  try {
    SyntheticConfig config =
        config_path.empty() ? SyntheticConfig{} : SyntheticConfig::from_json_file(config_path);
    if (seed) config.seed = *seed;
    config.validate();
    PanelDataset dataset = generate(config);
    save_panel(dataset, out_prefix + "_panel.csv", out_prefix + "_totals.csv");
    std::cout << "panel: " << out_prefix << "_panel.csv (" << dataset.n_observations()
              << " observations)\n";
    std::cout << "totals: " << out_prefix << "_totals.csv\n";
    std::cout << "core_region: " << dataset.core_region().code << "\n";
    std::cout << "true_phi:";
    for (double v : config.true_phi) std::cout << " " << v;
    std::cout << "\n";
    return 0;
  } catch (const Error& e) {
    std::cerr << "regemp: " << e.what() << "\n";
    return 1;
  }
}

int cmd_montecarlo(const std::string& config_path, std::optional<std::uint64_t> seed, int reps,
                   const std::string& format, const std::string& out_path) {
  try {
    SyntheticConfig config =
        config_path.empty() ? SyntheticConfig{} : SyntheticConfig::from_json_file(config_path);
    if (seed) config.seed = *seed;
    config.validate();
    MonteCarloSummary summary = monte_carlo(config, reps);
    std::string text =
        format == "json" ? render_montecarlo_json(summary) : render_montecarlo_text(summary);
    write_output(text, out_path);
    return 0;
  } catch (const Error& e) {
    std::cerr << "regemp: " << e.what() << "\n";
    return 1;
  }
}

int cmd_validate(const std::string& panel_path, const std::string& totals_path,
                 const std::string& schema_path) {
  try {
    SchemaMapping schema;
    if (!schema_path.empty()) schema = SchemaMapping::from_json_file(schema_path);
    PanelDataset dataset = load_panel(panel_path, totals_path, schema);
    for (const auto& warning : dataset.warnings())
      std::cerr << "regemp: warning: " << warning << "\n";
    auto violations = validate(dataset);
    for (const auto& v : violations)
      std::cout << v.invariant << " at " << v.cell << ": " << v.detail << "\n";
    if (violations.empty()) {
      std::cout << "ok: " << dataset.n_observations() << " observations, "
                << dataset.n_regions() << " regions x " << dataset.n_industries()
                << " industries x " << dataset.n_years() << " years\n";
      return 0;
    }
    return 1;
  } catch (const Error& e) {
    std::cerr << "regemp: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regional employment growth panel estimator"};
  app.require_subcommand(1);

  std::string panel_path, totals_path, schema_path, spec_path, config_path;
  std::string estimators = "lsdv,fd,re";
  std::string format = "text";
  std::string out_path, out_prefix = "synthetic";
  std::optional<std::uint64_t> seed;
  int reps = 100;

  auto* estimate = app.add_subcommand("estimate", "estimate the employment growth equation");
  estimate->add_option("--panel", panel_path, "panel CSV")->required();
  estimate->add_option("--totals", totals_path, "totals CSV")->required();
  estimate->add_option("--schema", schema_path, "schema-mapping JSON");
  estimate->add_option("--spec", spec_path, "model spec JSON");
  estimate->add_option("--estimators", estimators, "comma list of lsdv,fd,re");
  estimate->add_option("--format", format, "text, csv or json");
  estimate->add_option("--out", out_path, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "write a synthetic panel with known coefficients");
  simulate->add_option("--config", config_path, "synthetic config JSON");
  simulate->add_option("--seed", seed, "seed override");
  simulate->add_option("--out", out_prefix, "output prefix for _panel.csv / _totals.csv");

  auto* montecarlo = app.add_subcommand("montecarlo", "replicate generate + estimate and summarize");
  montecarlo->add_option("--config", config_path, "synthetic config JSON");
  montecarlo->add_option("--seed", seed, "seed override");
  montecarlo->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  montecarlo->add_option("--format", format, "text or json");
  montecarlo->add_option("--out", out_path, "output path (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "check a panel against its invariants");
  validate_cmd->add_option("--panel", panel_path, "panel CSV")->required();
  validate_cmd->add_option("--totals", totals_path, "totals CSV")->required();
  validate_cmd->add_option("--schema", schema_path, "schema-mapping JSON");

  CLI11_PARSE(app, argc, argv);

  if (estimate->parsed())
    return cmd_estimate(panel_path, totals_path, schema_path, spec_path, estimators, format,
                        out_path);
  if (simulate->parsed()) return cmd_simulate(config_path, seed, out_prefix);
  if (montecarlo->parsed()) return cmd_montecarlo(config_path, seed, reps, format, out_path);
  if (validate_cmd->parsed()) return cmd_validate(panel_path, totals_path, schema_path);
  return 1;
}
