#include "regemp/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "regemp/csv.hpp"
#include "regemp/errors.hpp"

namespace regemp {

namespace {

using json = nlohmann::json;

std::string cell_name(const std::string& region, const std::string& industry, int year) {
  return "(" + region + ", " + industry + ", " + std::to_string(year) + ")";
}

constexpr double kTotalsRelTol = 1e-9;

}  // namespace

SchemaMapping SchemaMapping::from_json_text(const std::string& text) {
  SchemaMapping schema;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad schema JSON: ") + e.what());
  }
  if (doc.contains("columns")) {
    for (auto& [key, value] : doc["columns"].items())
      schema.columns[key] = value.get<std::string>();
  }
  if (doc.contains("core_region")) schema.core_region = doc["core_region"].get<std::string>();
  if (doc.contains("flow_time_invariant")) schema.flow_time_invariant = doc["flow_time_invariant"].get<bool>();
  return schema;
}

SchemaMapping SchemaMapping::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open schema file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

namespace {

struct Axes {
  std::vector<RegionId> regions;
  std::vector<IndustryId> industries;
  std::vector<int> years;
};

Axes derive_axes(const std::vector<PanelObservation>& observations) {
  std::set<std::string> region_codes, industry_codes;
  std::set<int> year_set;
  for (const auto& obs : observations) {
    region_codes.insert(obs.region.code);
    industry_codes.insert(obs.industry.code);
    year_set.insert(obs.year);
  }
  Axes axes;
  for (const auto& code : region_codes) axes.regions.push_back({code});
  for (const auto& code : industry_codes) axes.industries.push_back({code});
  axes.years.assign(year_set.begin(), year_set.end());
  return axes;
}

void require_contiguous_years(const std::vector<int>& years) {
  for (std::size_t t = 1; t < years.size(); ++t)
    if (years[t] != years[t - 1] + 1)
      throw Error(ErrorKind::NonContiguousYears,
                  "gap between " + std::to_string(years[t - 1]) + " and " + std::to_string(years[t]));
}

void require_balanced(const std::vector<PanelObservation>& observations, const Axes& axes) {
  std::set<std::tuple<std::string, std::string, int>> seen;
  for (const auto& obs : observations) {
    auto key = std::make_tuple(obs.region.code, obs.industry.code, obs.year);
    if (!seen.insert(key).second)
      throw Error(ErrorKind::UnbalancedPanel,
                  "duplicate observation " + cell_name(obs.region.code, obs.industry.code, obs.year));
  }
  std::vector<std::string> missing;
  for (const auto& region : axes.regions)
    for (const auto& industry : axes.industries)
      for (int year : axes.years)
        if (!seen.count({region.code, industry.code, year}))
          missing.push_back(cell_name(region.code, industry.code, year));
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 8; ++i)
      list += (i ? ", " : "") + missing[i];
    if (missing.size() > 8) list += ", ...";
    throw Error(ErrorKind::UnbalancedPanel, "missing " + std::to_string(missing.size()) +
                                                " observation(s): " + list);
  }
}

}  // namespace

PanelDataset PanelDataset::unchecked(std::vector<PanelObservation> observations,
                                     std::map<std::pair<std::string, int>, double> region_totals,
                                     std::map<int, double> national_totals,
                                     std::optional<RegionId> core_region) {
  if (observations.empty()) throw Error(ErrorKind::UnbalancedPanel, "no observations");
  Axes axes = derive_axes(observations);
  require_balanced(observations, axes);

  PanelDataset ds;
  ds.regions_ = std::move(axes.regions);
  ds.industries_ = std::move(axes.industries);
  ds.years_ = std::move(axes.years);

  std::sort(observations.begin(), observations.end(), [](const auto& a, const auto& b) {
    return std::tie(a.region.code, a.industry.code, a.year) <
           std::tie(b.region.code, b.industry.code, b.year);
  });
  ds.observations_ = std::move(observations);

  std::set<std::string> extra_names;
  for (const auto& obs : ds.observations_)
    for (const auto& [name, value] : obs.extras) extra_names.insert(name);
  ds.extra_columns_.assign(extra_names.begin(), extra_names.end());

  const auto R = ds.regions_.size();
  const auto T = ds.years_.size();
  ds.region_totals_.assign(R * T, std::nan(""));
  ds.national_totals_.assign(T, std::nan(""));
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t t = 0; t < T; ++t) {
      auto it = region_totals.find({ds.regions_[r].code, ds.years_[t]});
      if (it == region_totals.end())
        throw Error(ErrorKind::TotalsInconsistent,
                    "missing region total for (" + ds.regions_[r].code + ", " +
                        std::to_string(ds.years_[t]) + ")");
      ds.region_totals_[r * T + t] = it->second;
    }
  for (std::size_t t = 0; t < T; ++t) {
    auto it = national_totals.find(ds.years_[t]);
    if (it == national_totals.end())
      throw Error(ErrorKind::TotalsInconsistent,
                  "missing national total for " + std::to_string(ds.years_[t]));
    ds.national_totals_[t] = it->second;
  }

  if (core_region) {
    auto it = std::find(ds.regions_.begin(), ds.regions_.end(), *core_region);
    if (it == ds.regions_.end())
      throw Error(ErrorKind::ConfigError, "core region " + core_region->code + " not in dataset");
    ds.core_region_ = *core_region;
    ds.core_region_index_ = static_cast<int>(it - ds.regions_.begin());
  } else {
    // Default: the region attracting the largest cumulative goods flow,
    // mirroring how the agglomeration pole shows up in the data.
    double best = -1.0;
    int best_r = 0;
    for (int r = 0; r < ds.n_regions(); ++r) {
      double sum = 0.0;
      for (int j = 0; j < ds.n_industries(); ++j)
        for (int t = 0; t < ds.n_years(); ++t) sum += ds.goods_flow(r, j, t);
      if (sum > best) {
        best = sum;
        best_r = r;
      }
    }
    ds.core_region_ = ds.regions_[best_r];
    ds.core_region_index_ = best_r;
  }

  bool core_zero_flow = true;
  for (int j = 0; j < ds.n_industries() && core_zero_flow; ++j)
    for (int t = 0; t < ds.n_years(); ++t)
      if (ds.goods_flow(ds.core_region_index_, j, t) > 0.0) {
        core_zero_flow = false;
        break;
      }
  if (core_zero_flow)
    ds.warnings_.push_back("core region " + ds.core_region_.code +
                           " has zero goods flow everywhere; the transport regressor "
                           "needs a positive internal-flow value");
  return ds;
}

PanelDataset PanelDataset::checked(std::vector<PanelObservation> observations,
                                   std::map<std::pair<std::string, int>, double> region_totals,
                                   std::map<int, double> national_totals,
                                   std::optional<RegionId> core_region) {
  PanelDataset ds = unchecked(std::move(observations), std::move(region_totals),
                              std::move(national_totals), std::move(core_region));
  require_contiguous_years(ds.years());
  auto violations = validate(ds);
  if (!violations.empty()) {
    const auto& v = violations.front();
    ErrorKind kind = ErrorKind::TotalsInconsistent;
    if (v.invariant == "employment_positive") kind = ErrorKind::NonPositiveEmployment;
    else if (v.invariant == "wage_bill_positive" || v.invariant == "goods_flow_nonnegative")
      kind = ErrorKind::NonPositiveValue;
    else if (v.invariant == "years_contiguous") kind = ErrorKind::NonContiguousYears;
    throw Error(kind, v.cell + " " + v.detail);
  }
  return ds;
}

std::vector<Violation> validate(const PanelDataset& ds) {
  std::vector<Violation> out;
  const auto& years = ds.years();
  for (std::size_t t = 1; t < years.size(); ++t)
    if (years[t] != years[t - 1] + 1)
      out.push_back({"years_contiguous", std::to_string(years[t]),
                     "follows " + std::to_string(years[t - 1])});

  for (const auto& obs : ds.observations()) {
    const std::string cell = cell_name(obs.region.code, obs.industry.code, obs.year);
    if (!(obs.employment > 0.0))
      out.push_back({"employment_positive", cell, "employment = " + csv::format_double(obs.employment)});
    if (!(obs.wage_bill > 0.0))
      out.push_back({"wage_bill_positive", cell, "wage_bill = " + csv::format_double(obs.wage_bill)});
    if (obs.goods_flow < 0.0)
      out.push_back({"goods_flow_nonnegative", cell, "goods_flow = " + csv::format_double(obs.goods_flow)});
  }

  for (int r = 0; r < ds.n_regions(); ++r)
    for (int t = 0; t < ds.n_years(); ++t) {
      double manufacturing = 0.0;
      for (int j = 0; j < ds.n_industries(); ++j) manufacturing += ds.employment(r, j, t);
      double total = ds.region_total(r, t);
      if (manufacturing > total * (1.0 + kTotalsRelTol))
        out.push_back({"manufacturing_within_region_total",
                       "(" + ds.regions()[r].code + ", " + std::to_string(ds.years()[t]) + ")",
                       "manufacturing " + csv::format_double(manufacturing) + " exceeds region total " +
                           csv::format_double(total)});
    }

  for (int t = 0; t < ds.n_years(); ++t) {
    double sum = 0.0;
    for (int r = 0; r < ds.n_regions(); ++r) sum += ds.region_total(r, t);
    double national = ds.national_total(t);
    double scale = std::max(std::abs(national), 1.0);
    if (std::abs(sum - national) > kTotalsRelTol * scale)
      out.push_back({"national_total_is_region_sum", std::to_string(ds.years()[t]),
                     "region sum " + csv::format_double(sum) + " vs national " +
                         csv::format_double(national)});
  }
  return out;
}

PanelDataset load_panel(const std::string& panel_path, const std::string& totals_path,
                        const SchemaMapping& schema) {
  csv::Table panel = csv::read_file(panel_path);

  const std::vector<std::string> logical = {"region",     "industry",  "year",
                                            "employment", "wage_bill", "goods_flow"};
  std::map<std::string, int> col;
  for (const auto& name : logical) {
    int idx = panel.column(schema.resolve(name));
    if (idx < 0)
      throw Error(ErrorKind::MissingColumn,
                  "panel file lacks column '" + schema.resolve(name) + "' (" + name + ")");
    col[name] = idx;
  }
  std::vector<std::pair<std::string, int>> extra_cols;
  for (std::size_t i = 0; i < panel.header.size(); ++i) {
    bool standard = false;
    for (const auto& [name, idx] : col)
      if (static_cast<int>(i) == idx) standard = true;
    if (!standard) extra_cols.emplace_back(panel.header[i], static_cast<int>(i));
  }

  std::vector<PanelObservation> observations;
  observations.reserve(panel.rows.size());
  for (std::size_t row = 0; row < panel.rows.size(); ++row) {
    const auto& fields = panel.rows[row];
    if (fields.size() < panel.header.size())
      throw Error(ErrorKind::IoError,
                  "row " + std::to_string(row + 2) + " of " + panel_path + " has too few fields");
    const std::string ctx = panel_path + " row " + std::to_string(row + 2);
    PanelObservation obs;
    obs.region.code = fields[col["region"]];
    obs.industry.code = fields[col["industry"]];
    obs.year = csv::parse_int(fields[col["year"]], ctx);
    obs.employment = csv::parse_double(fields[col["employment"]], ctx);
    obs.wage_bill = csv::parse_double(fields[col["wage_bill"]], ctx);
    obs.goods_flow = csv::parse_double(fields[col["goods_flow"]], ctx);
    if (obs.region.code.empty() || obs.industry.code.empty())
      throw Error(ErrorKind::IoError, "empty region or industry id in " + ctx);
    for (const auto& [name, idx] : extra_cols)
      obs.extras[name] = csv::parse_double(fields[idx], ctx);
    observations.push_back(std::move(obs));
  }

  std::vector<std::string> warnings;
  if (schema.flow_time_invariant) {
    // Replicate each unit's first-year flow across all years.
    std::map<std::pair<std::string, std::string>, double> first_flow;
    std::map<std::pair<std::string, std::string>, int> first_year;
    for (const auto& obs : observations) {
      auto key = std::make_pair(obs.region.code, obs.industry.code);
      auto it = first_year.find(key);
      if (it == first_year.end() || obs.year < it->second) {
        first_year[key] = obs.year;
        first_flow[key] = obs.goods_flow;
      }
    }
    for (auto& obs : observations) {
      double fixed = first_flow[{obs.region.code, obs.industry.code}];
      if (obs.goods_flow != fixed) {
        warnings.push_back("time-invariant flow: overriding goods_flow at " +
                           cell_name(obs.region.code, obs.industry.code, obs.year));
        obs.goods_flow = fixed;
      }
    }
  }

  csv::Table totals = csv::read_file(totals_path);
  int t_region = totals.column(schema.resolve("region"));
  int t_year = totals.column(schema.resolve("year"));
  int t_total = totals.column(schema.resolve("total_employment"));
  if (t_region < 0 || t_year < 0 || t_total < 0)
    throw Error(ErrorKind::MissingColumn, "totals file needs columns region, year, total_employment");

  std::map<std::pair<std::string, int>, double> region_totals;
  std::map<int, double> national_totals;
  for (std::size_t row = 0; row < totals.rows.size(); ++row) {
    const auto& fields = totals.rows[row];
    const std::string ctx = totals_path + " row " + std::to_string(row + 2);
    if (fields.size() < totals.header.size())
      throw Error(ErrorKind::IoError, ctx + " has too few fields");
    std::string region = fields[t_region];
    int year = csv::parse_int(fields[t_year], ctx);
    double value = csv::parse_double(fields[t_total], ctx);
    if (region == "NATIONAL")
      national_totals[year] = value;
    else
      region_totals[{region, year}] = value;
  }

  std::optional<RegionId> core;
  if (schema.core_region) core = RegionId{*schema.core_region};
  PanelDataset ds = PanelDataset::checked(std::move(observations), std::move(region_totals),
                                          std::move(national_totals), std::move(core));
  for (const auto& w : warnings) ds.warnings_.push_back(w);
  return ds;
}

void save_panel(const PanelDataset& ds, const std::string& panel_path,
                const std::string& totals_path) {
  csv::Table panel;
  panel.header = {"region", "industry", "year", "employment", "wage_bill", "goods_flow"};
  for (const auto& name : ds.extra_columns()) panel.header.push_back(name);
  for (const auto& obs : ds.observations()) {
    std::vector<std::string> row = {obs.region.code,
                                    obs.industry.code,
                                    std::to_string(obs.year),
                                    csv::format_double(obs.employment),
                                    csv::format_double(obs.wage_bill),
                                    csv::format_double(obs.goods_flow)};
    for (const auto& name : ds.extra_columns()) {
      auto it = obs.extras.find(name);
      row.push_back(csv::format_double(it == obs.extras.end() ? 0.0 : it->second));
    }
    panel.rows.push_back(std::move(row));
  }
  csv::write_file(panel_path, panel);

  csv::Table totals;
  totals.header = {"region", "year", "total_employment"};
  for (int r = 0; r < ds.n_regions(); ++r)
    for (int t = 0; t < ds.n_years(); ++t)
      totals.rows.push_back({ds.regions()[r].code, std::to_string(ds.years()[t]),
                             csv::format_double(ds.region_total(r, t))});
  for (int t = 0; t < ds.n_years(); ++t)
    totals.rows.push_back({"NATIONAL", std::to_string(ds.years()[t]),
                           csv::format_double(ds.national_total(t))});
  csv::write_file(totals_path, totals);
}

}  // namespace regemp
