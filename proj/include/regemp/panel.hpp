#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace regemp {

struct RegionId {
  std::string code;
  auto operator<=>(const RegionId&) const = default;
};

struct IndustryId {
  std::string code;
  auto operator<=>(const IndustryId&) const = default;
};

/// One (region, industry, year) cell of the long-format panel.
struct PanelObservation {
  RegionId region;
  IndustryId industry;
  int year = 0;
  double employment = 0.0;   // salaried employees, must be > 0
  double wage_bill = 0.0;    // nominal manufacturing wages, must be > 0
  double goods_flow = 0.0;   // flow of goods to the core region, >= 0
  std::map<std::string, double> extras;  // any additional numeric columns
};

/// Column renames and loader options, normally supplied as a JSON file:
///   { "columns": {"region": "reg", ...},
///     "core_region": "R3",
///     "flow_time_invariant": false }
struct SchemaMapping {
  std::map<std::string, std::string> columns;  // logical name -> file column
  std::optional<std::string> core_region;
  bool flow_time_invariant = false;

  std::string resolve(const std::string& logical) const {
    auto it = columns.find(logical);
    return it == columns.end() ? logical : it->second;
  }

  static SchemaMapping from_json_file(const std::string& path);
  static SchemaMapping from_json_text(const std::string& text);
};

/// Balanced region x industry x year panel plus the economy-wide employment
/// totals that the feature construction needs. Immutable after construction;
/// safe to share across concurrent estimator runs.
class PanelDataset {
public:
  /// Builds the dataset and throws regemp::Error on the first violated
  /// invariant. `region_totals` is keyed (region code, year); national
  /// totals are keyed by year.
  static PanelDataset checked(std::vector<PanelObservation> observations,
                              std::map<std::pair<std::string, int>, double> region_totals,
                              std::map<int, double> national_totals,
                              std::optional<RegionId> core_region = std::nullopt);

  /// Same construction without invariant enforcement; for validate() tests
  /// and internal use. Requires a complete, duplicate-free observation set.
  static PanelDataset unchecked(std::vector<PanelObservation> observations,
                                std::map<std::pair<std::string, int>, double> region_totals,
                                std::map<int, double> national_totals,
                                std::optional<RegionId> core_region = std::nullopt);

  int n_regions() const { return static_cast<int>(regions_.size()); }
  int n_industries() const { return static_cast<int>(industries_.size()); }
  int n_years() const { return static_cast<int>(years_.size()); }
  int n_observations() const { return static_cast<int>(observations_.size()); }

  const std::vector<RegionId>& regions() const { return regions_; }
  const std::vector<IndustryId>& industries() const { return industries_; }
  const std::vector<int>& years() const { return years_; }
  const RegionId& core_region() const { return core_region_; }
  int core_region_index() const { return core_region_index_; }

  const PanelObservation& at(int r, int j, int t) const {
    return observations_[offset(r, j, t)];
  }
  double employment(int r, int j, int t) const { return at(r, j, t).employment; }
  double wage_bill(int r, int j, int t) const { return at(r, j, t).wage_bill; }
  double goods_flow(int r, int j, int t) const { return at(r, j, t).goods_flow; }

  /// L_it: whole-economy employment of region r in year index t.
  double region_total(int r, int t) const {
    return region_totals_[static_cast<std::size_t>(r) * years_.size() + t];
  }
  /// L_t: whole-economy national employment in year index t.
  double national_total(int t) const { return national_totals_[t]; }

  const std::vector<PanelObservation>& observations() const { return observations_; }
  const std::vector<std::string>& extra_columns() const { return extra_columns_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

private:
  PanelDataset() = default;
  std::size_t offset(int r, int j, int t) const {
    return (static_cast<std::size_t>(r) * industries_.size() + j) * years_.size() + t;
  }

  std::vector<PanelObservation> observations_;  // sorted by (region, industry, year)
  std::vector<RegionId> regions_;
  std::vector<IndustryId> industries_;
  std::vector<int> years_;
  std::vector<double> region_totals_;    // [r * T + t]
  std::vector<double> national_totals_;  // [t]
  std::vector<std::string> extra_columns_;
  RegionId core_region_;
  int core_region_index_ = -1;
  std::vector<std::string> warnings_;

  friend std::vector<struct Violation> validate(const PanelDataset&);
  friend PanelDataset load_panel(const std::string&, const std::string&,
                                 const struct SchemaMapping&);
};

struct Violation {
  std::string invariant;  // which invariant failed
  std::string cell;       // offending (region, industry, year) / (region, year) / year
  std::string detail;
};

/// Non-throwing invariant scan; empty result iff the dataset is valid.
std::vector<Violation> validate(const PanelDataset& dataset);

/// Loads observations and totals from two CSV files (see README for the
/// format) and returns a fully validated dataset.
PanelDataset load_panel(const std::string& panel_path,
                        const std::string& totals_path,
                        const SchemaMapping& schema = {});

/// Writes the canonical CSV representation; load_panel(save_panel(d)) == d.
void save_panel(const PanelDataset& dataset,
                const std::string& panel_path,
                const std::string& totals_path);

}  // namespace regemp
