#include "regemp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "regemp/csv.hpp"
#include "regemp/errors.hpp"
#include "regemp/features.hpp"

namespace regemp {

using json = nlohmann::json;

namespace {

std::string fixed3(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

const char* stars(double t_stat) {
  const double a = std::abs(t_stat);
  if (a >= 1.96) return "*";
  if (a >= 1.645) return "**";
  return "";
}

std::string phi_label(const std::string& symbol) {
  if (symbol == "const") return "phi_0";
  if (symbol.size() == 2 && symbol[0] == 'x' && symbol[1] >= '1' && symbol[1] <= '5')
    return std::string("phi_") + symbol[1] + " (" + symbol + ")";
  return symbol;
}

std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

}  // namespace

std::string format_estimate_cell(double estimate, double t_stat) {
  return fixed3(estimate) + stars(t_stat) + " (" + fixed3(t_stat) + ")";
}

std::string format_hausman_cell(const HausmanResult& hausman) {
  std::string cell = fixed3(hausman.statistic);
  if (hausman.statistic > chi_square_critical_95(hausman.dof)) cell += "*";
  return cell;
}

ReportInput run_pipeline(const PanelDataset& dataset, const ModelSpec& spec,
                         const std::vector<Method>& methods) {
  if (methods.empty()) throw Error(ErrorKind::ConfigError, "no estimators selected");
  FeatureTable features = build_features(dataset, FeatureOptions::from_spec(spec));

  ReportInput out;
  for (Method method : methods) {
    switch (method) {
      case Method::LSDV: {
        ModelSpec s = spec;
        s.intercept = false;
        s.dummies = ModelSpec::Dummies::All;
        out.results.push_back(estimate_lsdv(assemble_design(features, s), s));
        break;
      }
      case Method::FD:
        out.results.push_back(estimate_fd(features, spec));
        break;
      case Method::RE: {
        ModelSpec s = spec;
        s.intercept = true;
        s.dummies = ModelSpec::Dummies::None;
        s.dummy_exclusions.clear();
        out.results.push_back(estimate_re(assemble_design(features, s), s));
        break;
      }
    }
  }

  const EstimationResult* fe = nullptr;
  const EstimationResult* re = nullptr;
  for (const auto& result : out.results) {
    if (result.method == Method::LSDV) fe = &result;
    if (result.method == Method::RE) re = &result;
  }
  if (fe && re) {
    std::vector<std::string> symbols;
    for (const auto& symbol : fe->slope_symbols)
      if (std::find(re->slope_symbols.begin(), re->slope_symbols.end(), symbol) !=
          re->slope_symbols.end())
        symbols.push_back(symbol);
    if (!symbols.empty()) out.hausman = hausman_test(*fe, *re, symbols);
  }
  return out;
}

std::string render_text(const ReportInput& input) {
  constexpr std::size_t kLabel = 16;
  constexpr std::size_t kCell = 24;

  // Row order: constant, slopes in first-seen order, then the dummy block.
  std::vector<std::string> symbols;
  auto add_symbol = [&symbols](const std::string& s) {
    if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);
  };
  for (const auto& result : input.results)
    for (const auto& [symbol, c] : result.coefficients)
      if (symbol == "const") add_symbol(symbol);
  for (const auto& result : input.results)
    for (const auto& [symbol, c] : result.coefficients)
      if (symbol != "const" && symbol[0] != 'D') add_symbol(symbol);
  std::vector<std::string> dummies;
  for (const auto& result : input.results)
    for (const auto& [symbol, c] : result.coefficients)
      if (symbol[0] == 'D' &&
          std::find(dummies.begin(), dummies.end(), symbol) == dummies.end())
        dummies.push_back(symbol);
  std::sort(dummies.begin(), dummies.end(), [](const std::string& a, const std::string& b) {
    return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
  });

  std::ostringstream out;
  out << "Employment growth equation estimates\n";
  out << pad("", kLabel);
  for (const auto& result : input.results) out << pad(to_string(result.method), kCell);
  out << "\n";
  out << std::string(kLabel + kCell * input.results.size(), '-') << "\n";

  auto emit_row = [&](const std::string& label, const std::string& symbol) {
    out << pad(label, kLabel);
    for (const auto& result : input.results) {
      const Coefficient* c = result.find(symbol);
      out << pad(c ? format_estimate_cell(c->estimate, c->t_stat) : "", kCell);
    }
    out << "\n";
  };

  for (const auto& symbol : symbols) emit_row(phi_label(symbol), symbol);
  for (const auto& symbol : dummies) emit_row(symbol, symbol);

  out << std::string(kLabel + kCell * input.results.size(), '-') << "\n";
  out << pad("R2 adjusted", kLabel);
  for (const auto& result : input.results) out << pad(fixed3(result.r2_adjusted), kCell);
  out << "\n" << pad("Durbin-Watson", kLabel);
  for (const auto& result : input.results) out << pad(fixed3(result.durbin_watson), kCell);
  out << "\n" << pad("n", kLabel);
  for (const auto& result : input.results) out << pad(std::to_string(result.n_obs), kCell);
  out << "\n";
  if (input.hausman) {
    out << pad("Hausman chi2(" + std::to_string(input.hausman->dof) + ")", kLabel)
        << format_hausman_cell(*input.hausman);
    if (input.hausman->psd_corrected) out << "  [psd-corrected]";
    out << "\n";
  }
  for (const auto& result : input.results) {
    if (result.variance_components) {
      const auto& vc = *result.variance_components;
      out << to_string(result.method) << " variance components: sigma2_u=" << fixed3(vc.sigma2_u)
          << " sigma2_e=" << fixed3(vc.sigma2_e) << " theta=" << fixed3(vc.theta) << "\n";
    }
    for (const auto& note : result.notes)
      out << to_string(result.method) << " note: " << note << "\n";
    if (!result.dropped.empty()) {
      out << to_string(result.method) << " dropped:";
      for (const auto& symbol : result.dropped) out << " " << symbol;
      out << "\n";
    }
  }
  out << "* coefficient statistically significant at the 5% level, "
         "** coefficient statistically significant at 10%\n";
  out << "(significance from the normal approximation: 1.96 / 1.645)\n";
  return out.str();
}

std::string render_csv(const ReportInput& input) {
  std::ostringstream out;
  out << "method,kind,symbol,value,std_error,t_stat\n";
  for (const auto& result : input.results) {
    const char* m = to_string(result.method);
    for (const auto& [symbol, c] : result.coefficients)
      out << m << ",coef," << symbol << "," << csv::format_double(c.estimate) << ","
          << csv::format_double(c.std_error) << "," << csv::format_double(c.t_stat) << "\n";
    out << m << ",stat,r2_adjusted," << csv::format_double(result.r2_adjusted) << ",,\n";
    out << m << ",stat,durbin_watson," << csv::format_double(result.durbin_watson) << ",,\n";
    out << m << ",stat,n_obs," << result.n_obs << ",,\n";
    if (result.variance_components) {
      const auto& vc = *result.variance_components;
      out << m << ",stat,sigma2_u," << csv::format_double(vc.sigma2_u) << ",,\n";
      out << m << ",stat,sigma2_e," << csv::format_double(vc.sigma2_e) << ",,\n";
      out << m << ",stat,theta," << csv::format_double(vc.theta) << ",,\n";
    }
  }
  if (input.hausman)
    out << "HAUSMAN,stat,chi_square," << csv::format_double(input.hausman->statistic) << ","
        << input.hausman->dof << "," << (input.hausman->psd_corrected ? 1 : 0) << "\n";
  return out.str();
}

std::string render_json(const ReportInput& input) {
  json doc;
  doc["results"] = json::array();
  for (const auto& result : input.results) {
    json r;
    r["method"] = to_string(result.method);
    r["n_obs"] = result.n_obs;
    r["r2_adjusted"] = result.r2_adjusted;
    r["durbin_watson"] = result.durbin_watson;
    json coefficients = json::object();
    json order = json::array();
    for (const auto& [symbol, c] : result.coefficients) {
      coefficients[symbol] = {
          {"estimate", c.estimate}, {"std_error", c.std_error}, {"t_stat", c.t_stat}};
      order.push_back(symbol);
    }
    r["coefficients"] = coefficients;
    r["order"] = order;
    if (result.variance_components) {
      const auto& vc = *result.variance_components;
      r["variance_components"] = {
          {"sigma2_u", vc.sigma2_u}, {"sigma2_e", vc.sigma2_e}, {"theta", vc.theta}};
    }
    r["dropped"] = result.dropped;
    r["notes"] = result.notes;
    doc["results"].push_back(std::move(r));
  }
  if (input.hausman) {
    doc["hausman"] = {{"statistic", input.hausman->statistic},
                      {"dof", input.hausman->dof},
                      {"comparison", input.hausman->comparison},
                      {"psd_corrected", input.hausman->psd_corrected}};
  }
  return doc.dump(2);
}

std::string render_montecarlo_text(const MonteCarloSummary& summary) {
  std::ostringstream out;
  out << "Monte Carlo summary over " << summary.replications << " replication(s)\n";
  for (const auto& estimator : summary.estimators) {
    out << to_string(estimator.method) << "\n";
    out << pad("  symbol", 10) << pad("truth", 12) << pad("mean", 12) << pad("bias", 12)
        << pad("sd", 12) << pad("rmse", 12) << pad("coverage95", 12) << "\n";
    for (const auto& s : estimator.slopes) {
      out << pad("  " + s.symbol, 10) << pad(fixed3(s.truth), 12) << pad(fixed3(s.mean), 12)
          << pad(fixed3(s.bias), 12) << pad(fixed3(s.sd), 12) << pad(fixed3(s.rmse), 12)
          << pad(fixed3(s.coverage), 12) << "\n";
    }
  }
  out << "Hausman: mean=" << fixed3(summary.hausman_mean)
      << " rejection_rate_5pct=" << fixed3(summary.hausman_rejection_rate)
      << " dof=" << summary.hausman_dof << "\n";
  return out.str();
}

std::string render_montecarlo_json(const MonteCarloSummary& summary) {
  json doc;
  doc["replications"] = summary.replications;
  doc["hausman"] = {{"mean", summary.hausman_mean},
                    {"rejection_rate_5pct", summary.hausman_rejection_rate},
                    {"dof", summary.hausman_dof}};
  doc["estimators"] = json::array();
  for (const auto& estimator : summary.estimators) {
    json e;
    e["method"] = to_string(estimator.method);
    e["slopes"] = json::array();
    for (const auto& s : estimator.slopes)
      e["slopes"].push_back({{"symbol", s.symbol},
                             {"truth", s.truth},
                             {"mean", s.mean},
                             {"bias", s.bias},
                             {"sd", s.sd},
                             {"rmse", s.rmse},
                             {"coverage95", s.coverage}});
    doc["estimators"].push_back(std::move(e));
  }
  return doc.dump(2);
}

}  // namespace regemp
