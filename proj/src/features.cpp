#include "regemp/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "regemp/errors.hpp"

namespace regemp {

namespace {

double checked_log(double value, const std::string& term, const std::string& cell) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw Error(ErrorKind::NonPositiveLogArgument, term + " at " + cell + " = " +
                                                       std::to_string(value));
  return std::log(value);
}

std::string cell_name(const PanelDataset& ds, int r, int j, int t) {
  return "(" + ds.regions()[r].code + ", " + ds.industries()[j].code + ", " +
         std::to_string(ds.years()[t]) + ")";
}

}  // namespace

double FeatureRow::regressor(const std::string& symbol) const {
  if (symbol == "x1") return x1_wage;
  if (symbol == "x2") return x2_transport;
  if (symbol == "x3") return x3_linkages;
  if (symbol == "x4") return x4_agglomeration;
  if (symbol == "x5") return x5_concentration;
  auto it = extras.find(symbol);
  if (it != extras.end()) return it->second;
  throw Error(ErrorKind::MissingSymbol, "no regressor '" + symbol + "' in feature row");
}

FeatureTable build_features(const PanelDataset& ds, const FeatureOptions& options) {
  const int R = ds.n_regions();
  const int J = ds.n_industries();
  const int T = ds.n_years();
  if (T < 3)
    throw Error(ErrorKind::InsufficientYears,
                "need at least 3 years (lag + difference), have " + std::to_string(T));

  // National industry aggregates and regional manufacturing totals per year.
  std::vector<double> nat_ind_emp(static_cast<std::size_t>(J) * T, 0.0);   // L_jt
  std::vector<double> nat_ind_wage(static_cast<std::size_t>(J) * T, 0.0);  // Rem_jt
  std::vector<double> region_man(static_cast<std::size_t>(R) * T, 0.0);    // L_ikt
  for (int r = 0; r < R; ++r)
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t) {
        const auto& obs = ds.at(r, j, t);
        nat_ind_emp[j * T + t] += obs.employment;
        nat_ind_wage[j * T + t] += obs.wage_bill;
        region_man[r * T + t] += obs.employment;
      }
  std::vector<double> nat_man(T, 0.0);  // L_kt
  for (int j = 0; j < J; ++j)
    for (int t = 0; t < T; ++t) nat_man[t] += nat_ind_emp[j * T + t];

  // Concentration sums: full squared-share sums, own industry removed later.
  std::vector<double> region_conc(static_cast<std::size_t>(R) * T, 0.0);
  std::vector<double> nat_conc(T, 0.0);
  for (int t = 0; t < T; ++t) {
    for (int r = 0; r < R; ++r) {
      double acc = 0.0;
      for (int j = 0; j < J; ++j) {
        double share = ds.employment(r, j, t) / ds.region_total(r, t);
        acc += share * share;
      }
      region_conc[r * T + t] = acc;
    }
    double acc = 0.0;
    for (int j = 0; j < J; ++j) {
      double share = nat_ind_emp[j * T + t] / ds.national_total(t);
      acc += share * share;
    }
    nat_conc[t] = acc;
  }

  // Per-year flows consume an extra lag: the weighted-mean denominator uses
  // shares dated one period before the (already lagged) flow itself.
  const int first_t = options.flow_mode == FlowMode::Lagged ? 2 : 1;

  FeatureTable table;
  for (const auto& region : ds.regions()) table.region_codes.push_back(region.code);
  for (const auto& industry : ds.industries()) table.industry_codes.push_back(industry.code);

  for (int r = 0; r < R; ++r)
    for (int j = 0; j < J; ++j)
      for (int t = first_t; t < T; ++t) {
        const int lag = t - 1;
        const std::string cell = cell_name(ds, r, j, t);
        FeatureRow row;
        row.region_index = r;
        row.industry_index = j;
        row.region = ds.regions()[r].code;
        row.industry = ds.industries()[j].code;
        row.year = ds.years()[t];

        const double share_now = ds.employment(r, j, t) / nat_ind_emp[j * T + t];
        const double share_lag = ds.employment(r, j, lag) / nat_ind_emp[j * T + lag];
        if (options.dep_mode == DepMode::DeltaLn)
          row.dep = checked_log(share_now, "dep numerator share", cell) -
                    checked_log(share_lag, "dep lagged share", cell);
        else
          row.dep = checked_log(share_now, "dep share", cell);

        const double wage_rate = ds.wage_bill(r, j, lag) / ds.employment(r, j, lag);
        const double nat_wage_rate = nat_ind_wage[j * T + lag] / nat_ind_emp[j * T + lag];
        row.x1_wage = checked_log(wage_rate / nat_wage_rate, "x1 wage ratio", cell);

        {
          int flow_t = options.flow_mode == FlowMode::Lagged ? lag : 0;
          int weight_t = options.flow_mode == FlowMode::Lagged ? lag - 1 : lag;
          double own_flow = ds.goods_flow(r, j, flow_t);
          double weighted_mean = 0.0;
          for (int i = 0; i < R; ++i) {
            double w = options.omega == OmegaWeights::EmploymentShare
                           ? ds.employment(i, j, weight_t) / nat_ind_emp[j * T + weight_t]
                           : 1.0 / R;
            weighted_mean += w * ds.goods_flow(i, j, flow_t);
          }
          row.x2_transport = checked_log(own_flow, "x2 goods flow", cell) -
                             checked_log(weighted_mean, "x2 weighted mean flow", cell);
        }

        const double reg_ratio = region_man[r * T + lag] / ds.employment(r, j, lag);
        const double nat_ratio = nat_man[lag] / nat_ind_emp[j * T + lag];
        row.x3_linkages = checked_log(reg_ratio / nat_ratio, "x3 linkage ratio", cell);

        const double reg_share = ds.employment(r, j, lag) / ds.region_total(r, lag);
        const double nat_share = nat_ind_emp[j * T + lag] / ds.national_total(lag);
        row.x4_agglomeration = checked_log(reg_share / nat_share, "x4 agglomeration ratio", cell);

        {
          double own_reg = ds.employment(r, j, lag) / ds.region_total(r, lag);
          double own_nat = nat_ind_emp[j * T + lag] / ds.national_total(lag);
          double reg_sum = region_conc[r * T + lag] - own_reg * own_reg;
          double nat_sum = nat_conc[lag] - own_nat * own_nat;
          row.x5_concentration = checked_log(reg_sum, "x5 regional concentration", cell) -
                                 checked_log(nat_sum, "x5 national concentration", cell);
        }

        for (const auto& name : options.extra_regressors) {
          const auto& obs = ds.at(r, j, lag);
          auto it = obs.extras.find(name);
          if (it == obs.extras.end())
            throw Error(ErrorKind::MissingColumn, "extra regressor '" + name + "' absent at " + cell);
          row.extras[name] = it->second;
        }

        for (double v : {row.dep, row.x1_wage, row.x2_transport, row.x3_linkages,
                         row.x4_agglomeration, row.x5_concentration})
          if (!std::isfinite(v))
            throw Error(ErrorKind::NonPositiveLogArgument, "non-finite feature at " + cell);

        table.rows.push_back(std::move(row));
      }

  std::sort(table.rows.begin(), table.rows.end(), [](const FeatureRow& a, const FeatureRow& b) {
    return std::tie(a.region, a.industry, a.year) < std::tie(b.region, b.industry, b.year);
  });
  return table;
}

std::string dummy_symbol(int region_index, int industry_index, int n_regions) {
  return "D" + std::to_string(industry_index * n_regions + region_index + 1);
}

int DesignMatrix::column_of(const std::string& symbol) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c].symbol == symbol) return static_cast<int>(c);
  return -1;
}

DesignMatrix assemble_design(const FeatureTable& table, const ModelSpec& spec) {
  if (table.rows.empty()) throw Error(ErrorKind::InsufficientYears, "no feature rows");
  const int R = table.n_regions();
  const int J = table.n_industries();
  const int n = static_cast<int>(table.rows.size());

  // Parse exclusion symbols into grid indices.
  std::set<int> excluded;  // 1-based D numbers
  for (const auto& symbol : spec.dummy_exclusions) {
    if (symbol.size() < 2 || symbol[0] != 'D')
      throw Error(ErrorKind::UnknownUnitInExclusionList, "'" + symbol + "'");
    int k = 0;
    for (std::size_t i = 1; i < symbol.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(symbol[i])))
        throw Error(ErrorKind::UnknownUnitInExclusionList, "'" + symbol + "'");
      k = k * 10 + (symbol[i] - '0');
    }
    if (k < 1 || k > R * J)
      throw Error(ErrorKind::UnknownUnitInExclusionList,
                  "'" + symbol + "' outside the " + std::to_string(R * J) + "-unit grid");
    excluded.insert(k);
  }

  const bool with_dummies = spec.dummies == ModelSpec::Dummies::All;
  if (spec.intercept && with_dummies && excluded.empty())
    throw Error(ErrorKind::RankDeficientByConstruction,
                "constant plus the complete dummy set is collinear; exclude a dummy or drop one");

  DesignMatrix design;
  design.region_codes = table.region_codes;
  design.industry_codes = table.industry_codes;
  design.has_intercept = spec.intercept;

  // Row-order units (region-major, matching the sorted feature rows).
  std::map<std::pair<int, int>, int> unit_of;
  design.unit_index.reserve(n);
  for (const auto& row : table.rows) {
    auto key = std::make_pair(row.region_index, row.industry_index);
    auto it = unit_of.find(key);
    if (it == unit_of.end()) {
      it = unit_of.emplace(key, design.n_units()).first;
      design.units.push_back(key);
    }
    design.unit_index.push_back(it->second);
    design.row_year.push_back(row.year);
  }

  std::vector<std::string> regressors;
  for (const char* canonical : {"x1", "x2", "x3", "x4", "x5"})
    if (std::find(spec.regressors.begin(), spec.regressors.end(), canonical) != spec.regressors.end())
      regressors.push_back(canonical);
  for (const auto& name : spec.extra_regressors) regressors.push_back(name);

  if (spec.intercept) design.columns.push_back({"const", false, -1});
  for (const auto& name : regressors) design.columns.push_back({name, false, -1});

  // Dummy columns in D-number order (industry-major grid).
  std::vector<int> dummy_unit;  // column -> unit index, aligned with dummy columns
  if (with_dummies) {
    for (int j = 0; j < J; ++j)
      for (int r = 0; r < R; ++r) {
        int d = j * R + r + 1;
        if (excluded.count(d)) continue;
        auto it = unit_of.find({r, j});
        int unit = it == unit_of.end() ? -1 : it->second;
        design.columns.push_back({"D" + std::to_string(d), true, unit});
        dummy_unit.push_back(unit);
      }
  }

  const int p = static_cast<int>(design.columns.size());
  design.X = Eigen::MatrixXd::Zero(n, p);
  design.y = Eigen::VectorXd(n);

  for (int i = 0; i < n; ++i) {
    const auto& row = table.rows[i];
    design.y(i) = row.dep;
    int c = 0;
    if (spec.intercept) design.X(i, c++) = 1.0;
    for (const auto& name : regressors) design.X(i, c++) = row.regressor(name);
    if (with_dummies) {
      for (std::size_t d = 0; d < dummy_unit.size(); ++d)
        if (dummy_unit[d] == design.unit_index[i]) design.X(i, c + static_cast<int>(d)) = 1.0;
    }
  }

  if (spec.flow_mode == FlowMode::Static && with_dummies &&
      std::find(regressors.begin(), regressors.end(), "x2") != regressors.end())
    design.warnings.push_back(
        "static flows make x2 constant per unit and collinear with the dummies; "
        "the solver will drop it by rank detection");
  return design;
}

}  // namespace regemp
