#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "regemp/model_spec.hpp"
#include "regemp/panel.hpp"

namespace regemp {

/// One observation of the employment-growth regression: the dependent
/// log-difference and the five log-ratio regressors, all built from the
/// panel with regressors lagged one period. `year` is the calendar year of
/// the growth being explained (the later year of the difference).
struct FeatureRow {
  int region_index = 0;
  int industry_index = 0;
  std::string region;
  std::string industry;
  int year = 0;
  double dep = 0.0;            // relative employment growth
  double x1_wage = 0.0;        // relative wage per worker
  double x2_transport = 0.0;   // goods flow vs weighted mean flow
  double x3_linkages = 0.0;    // total-manufacturing to own-industry ratio
  double x4_agglomeration = 0.0;  // own-industry share of regional economy vs national
  double x5_concentration = 0.0;  // other-industry concentration vs national
  std::map<std::string, double> extras;  // lagged values of user-requested columns

  double regressor(const std::string& symbol) const;
};

struct FeatureOptions {
  FlowMode flow_mode = FlowMode::Lagged;
  OmegaWeights omega = OmegaWeights::EmploymentShare;
  DepMode dep_mode = DepMode::DeltaLn;
  std::vector<std::string> extra_regressors;

  static FeatureOptions from_spec(const ModelSpec& spec) {
    return {spec.flow_mode, spec.omega, spec.dep_mode, spec.extra_regressors};
  }
};

/// Feature rows plus the axis metadata needed downstream (dummy numbering
/// requires the full region/industry grid even if a unit were excluded).
struct FeatureTable {
  std::vector<FeatureRow> rows;  // sorted by (region, industry, year)
  std::vector<std::string> region_codes;
  std::vector<std::string> industry_codes;
  int n_regions() const { return static_cast<int>(region_codes.size()); }
  int n_industries() const { return static_cast<int>(industry_codes.size()); }
};

FeatureTable build_features(const PanelDataset& dataset, const FeatureOptions& options = {});

struct ColumnInfo {
  std::string symbol;  // "const", "x1".."x5", extra name, or "D<k>"
  bool is_dummy = false;
  int unit = -1;  // row-order unit index for dummy columns
};

/// Regressor matrix and dependent vector in estimation order. Rows are
/// grouped by (region, industry) unit, ascending in year within unit.
struct DesignMatrix {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<ColumnInfo> columns;
  std::vector<int> unit_index;  // per row
  std::vector<std::pair<int, int>> units;  // unit -> (region_index, industry_index)
  std::vector<int> row_year;
  std::vector<std::string> region_codes;
  std::vector<std::string> industry_codes;
  bool has_intercept = false;
  std::vector<std::string> warnings;

  int n_units() const { return static_cast<int>(units.size()); }
  int column_of(const std::string& symbol) const;  // -1 if absent
};

/// Lays out columns as: optional constant, x1..x5 subset, extra regressors,
/// then one 0/1 dummy per non-excluded unit. Dummy D-numbering follows the
/// industry-major grid: D = (industry_pos - 1) * n_regions + region_pos.
DesignMatrix assemble_design(const FeatureTable& table, const ModelSpec& spec);

/// Symbol for the unit dummy of (region_index, industry_index), 1-based grid.
std::string dummy_symbol(int region_index, int industry_index, int n_regions);

}  // namespace regemp
