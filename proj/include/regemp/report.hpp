#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regemp/diagnostics.hpp"
#include "regemp/estimators.hpp"
#include "regemp/panel.hpp"
#include "regemp/synth.hpp"

namespace regemp {

struct ReportInput {
  std::vector<EstimationResult> results;
  std::optional<HausmanResult> hausman;
};

/// Runs features -> selected estimators -> Hausman (when both LSDV and RE
/// are requested) over one dataset. The model spec describes the shared
/// regressor choices; each estimator gets its conventional design (LSDV the
/// dummies without a constant, RE a constant without dummies).
ReportInput run_pipeline(const PanelDataset& dataset, const ModelSpec& spec,
                         const std::vector<Method>& methods);

/// "0.119* (2.086)": estimate and t-statistic at 3 decimals; * flags |t|
/// beyond the 5% normal critical value (1.96), ** beyond the 10% one (1.645).
std::string format_estimate_cell(double estimate, double t_stat);

/// "7777.548*": statistic at 3 decimals, starred at the 5% chi-square level.
std::string format_hausman_cell(const HausmanResult& hausman);

/// Fixed-layout table mirroring the published report: one column per
/// estimator, coefficient rows (t-statistics in parentheses), the dummy
/// block, then fit statistics and the Hausman test.
std::string render_text(const ReportInput& input);

/// Long-format CSV at full precision.
std::string render_csv(const ReportInput& input);

/// Full-precision JSON with every statistic the text report shows.
std::string render_json(const ReportInput& input);

std::string render_montecarlo_text(const MonteCarloSummary& summary);
std::string render_montecarlo_json(const MonteCarloSummary& summary);

}  // namespace regemp
