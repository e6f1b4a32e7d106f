#include "regemp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "regemp/diagnostics.hpp"
#include "regemp/errors.hpp"
#include "regemp/features.hpp"
#include "regemp/rng.hpp"

namespace regemp {

using json = nlohmann::json;

void SyntheticConfig::validate() const {
  if (n_regions < 2 || n_industries < 2 || n_years < 2)
    throw Error(ErrorKind::ConfigError, "panel dimensions must each be at least 2");
  if (!(sigma_e > 0.0)) throw Error(ErrorKind::ConfigError, "sigma_e must be > 0");
  if (sigma_u < 0.0) throw Error(ErrorKind::ConfigError, "sigma_u must be >= 0");
  if (effect_correlation < -1.0 || effect_correlation > 1.0)
    throw Error(ErrorKind::ConfigError, "effect_correlation must lie in [-1, 1]");
  if (std::abs(true_phi[1]) < 1e-12)
    throw Error(ErrorKind::ConfigError,
                "phi_1 must be nonzero: the wage regressor carries the balance solve");
  if (!(baseline.employment > 0.0) || !(baseline.wage > 0.0) || !(baseline.flow > 0.0) ||
      !(baseline.nonmanufacturing_multiplier > 0.0))
    throw Error(ErrorKind::ConfigError, "baseline levels must be positive");
}

std::string SyntheticConfig::to_json_text() const {
  json doc;
  doc["n_regions"] = n_regions;
  doc["n_industries"] = n_industries;
  doc["n_years"] = n_years;
  doc["start_year"] = start_year;
  doc["true_phi"] = true_phi;
  doc["intercept"] = intercept;
  doc["sigma_e"] = sigma_e;
  doc["sigma_u"] = sigma_u;
  doc["effect_correlation"] = effect_correlation;
  doc["seed"] = seed;
  doc["flow_mode"] = to_string(flow_mode);
  doc["omega"] = to_string(omega);
  doc["baseline"] = {{"employment", baseline.employment},
                     {"wage", baseline.wage},
                     {"flow", baseline.flow},
                     {"nonmanufacturing_multiplier", baseline.nonmanufacturing_multiplier},
                     {"share_dispersion", baseline.share_dispersion},
                     {"share_shock", baseline.share_shock},
                     {"wage_shape", baseline.wage_shape},
                     {"flow_shock", baseline.flow_shock},
                     {"industry_growth", baseline.industry_growth}};
  return doc.dump(2);
}

SyntheticConfig SyntheticConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad synthetic config JSON: ") + e.what());
  }
  SyntheticConfig config;
  try {
    if (doc.contains("n_regions")) config.n_regions = doc["n_regions"].get<int>();
    if (doc.contains("n_industries")) config.n_industries = doc["n_industries"].get<int>();
    if (doc.contains("n_years")) config.n_years = doc["n_years"].get<int>();
    if (doc.contains("start_year")) config.start_year = doc["start_year"].get<int>();
    if (doc.contains("true_phi")) {
      auto phi = doc["true_phi"].get<std::vector<double>>();
      if (phi.size() != 6)
        throw Error(ErrorKind::ConfigError, "true_phi must have 6 entries (phi_0..phi_5)");
      std::copy(phi.begin(), phi.end(), config.true_phi.begin());
    }
    if (doc.contains("intercept")) config.intercept = doc["intercept"].get<bool>();
    if (doc.contains("sigma_e")) config.sigma_e = doc["sigma_e"].get<double>();
    if (doc.contains("sigma_u")) config.sigma_u = doc["sigma_u"].get<double>();
    if (doc.contains("effect_correlation"))
      config.effect_correlation = doc["effect_correlation"].get<double>();
    if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("flow_mode")) {
      std::string mode = doc["flow_mode"].get<std::string>();
      config.flow_mode = mode == "static" ? FlowMode::Static : FlowMode::Lagged;
    }
    if (doc.contains("omega")) {
      std::string mode = doc["omega"].get<std::string>();
      config.omega = mode == "uniform" ? OmegaWeights::Uniform : OmegaWeights::EmploymentShare;
    }
    if (doc.contains("baseline")) {
      const auto& b = doc["baseline"];
      auto get = [&b](const char* key, double fallback) {
        return b.contains(key) ? b[key].get<double>() : fallback;
      };
      config.baseline.employment = get("employment", config.baseline.employment);
      config.baseline.wage = get("wage", config.baseline.wage);
      config.baseline.flow = get("flow", config.baseline.flow);
      config.baseline.nonmanufacturing_multiplier =
          get("nonmanufacturing_multiplier", config.baseline.nonmanufacturing_multiplier);
      config.baseline.share_dispersion = get("share_dispersion", config.baseline.share_dispersion);
      config.baseline.share_shock = get("share_shock", config.baseline.share_shock);
      config.baseline.wage_shape = get("wage_shape", config.baseline.wage_shape);
      config.baseline.flow_shock = get("flow_shock", config.baseline.flow_shock);
      config.baseline.industry_growth = get("industry_growth", config.baseline.industry_growth);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("bad synthetic config field: ") + e.what());
  }
  config.validate();
  return config;
}

SyntheticConfig SyntheticConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open synthetic config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

namespace {

std::string axis_code(const char* prefix, int index, int count) {
  int width = count > 99 ? 3 : (count > 9 ? 2 : 1);
  std::string digits = std::to_string(index + 1);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return prefix + digits;
}

/// ln sum_r s_r exp(v_r), max-shifted for stability.
double lse(const std::vector<double>& s, const std::vector<double>& v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  double acc = 0.0;
  for (std::size_t r = 0; r < v.size(); ++r) acc += s[r] * std::exp(v[r] - m);
  return m + std::log(acc);
}

std::vector<double> centered(const std::vector<double>& s, const std::vector<double>& v) {
  double shift = lse(s, v);
  std::vector<double> out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r) out[r] = v[r] - shift;
  return out;
}

/// Per industry-year system: find a wage shape a and systematic growth d with
///   d = phi1 * a + c,   lse_s(d) = 0,   lse_s(a) = 0.
/// The two weighted identities are what any realizable panel must satisfy
/// (shares of a sum and wages against their weighted mean). Parametrized as
/// a = centered(lambda * eta - rho * c), which reduces the system to a 1-D
/// root-find in rho; eta is redrawn and c recentered if no bracket exists.
struct BalanceSolution {
  std::vector<double> wage_shape;       // a
  std::vector<double> systematic;       // d
};

BalanceSolution solve_balance(const std::vector<double>& s, std::vector<double> c, double phi1,
                              double eta_scale, SplitMix64& rng, GenerationStats& stats) {
  const int R = static_cast<int>(s.size());
  ++stats.blocks;

  static const double grid[] = {-64, -48, -32, -24, -16, -12, -8, -6, -4, -3, -2, -1.5,
                                -1, -0.75, -0.5, -0.375, -0.25, -0.125, 0, 0.125, 0.25,
                                0.375, 0.5, 0.75, 1, 1.5, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};

  auto objective = [&](const std::vector<double>& eta, double lambda, double rho,
                       const std::vector<double>& cc, std::vector<double>* a_out) {
    std::vector<double> raw(R);
    for (int r = 0; r < R; ++r) raw[r] = lambda * eta[r] - rho * cc[r];
    std::vector<double> a = centered(s, raw);
    std::vector<double> d(R);
    for (int r = 0; r < R; ++r) d[r] = phi1 * a[r] + cc[r];
    if (a_out) *a_out = std::move(a);
    return lse(s, d);
  };

  auto try_solve = [&](const std::vector<double>& eta, double lambda,
                       const std::vector<double>& cc, BalanceSolution& out) {
    double prev_rho = grid[0];
    double prev_f = objective(eta, lambda, prev_rho, cc, nullptr);
    for (double rho : grid) {
      if (rho == grid[0]) continue;
      double f = objective(eta, lambda, rho, cc, nullptr);
      if (prev_f == 0.0 || (prev_f < 0.0) != (f < 0.0)) {
        double lo = prev_rho, hi = rho;
        double flo = prev_f;
        for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
          double mid = 0.5 * (lo + hi);
          double fm = objective(eta, lambda, mid, cc, nullptr);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double root = 0.5 * (lo + hi);
        std::vector<double> a;
        double residual = objective(eta, lambda, root, cc, &a);
        if (std::abs(residual) < 1e-11) {
          out.wage_shape = std::move(a);
          out.systematic.resize(R);
          for (int r = 0; r < R; ++r) out.systematic[r] = phi1 * out.wage_shape[r] + cc[r];
          return true;
        }
      }
      prev_rho = rho;
      prev_f = f;
    }
    return false;
  };

  auto draw_eta = [&]() {
    std::vector<double> eta(R);
    for (int r = 0; r < R; ++r) eta[r] = eta_scale * rng.next_normal();
    return eta;
  };

  // Reach bound: over wage shapes with lse_s(a) = 0 and 0 < phi1 < 1, the
  // supremum of lse_s(phi1 a + c) is (1 - phi1) lse_s(c / (1 - phi1)), so a
  // root exists only when that is nonnegative. The shrinking lambda ladder
  // handles draws whose realized dispersion overshoots the root.
  const bool reachable = [&] {
    if (phi1 <= 0.0 || phi1 >= 1.0) return true;  // bound only holds inside (0,1)
    std::vector<double> scaled(R);
    for (int r = 0; r < R; ++r) scaled[r] = c[r] / (1.0 - phi1);
    return (1.0 - phi1) * lse(s, scaled) > -0.02;
  }();

  BalanceSolution out;
  if (reachable) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (attempt > 0) ++stats.eta_redraws;
      auto eta = draw_eta();
      for (double lambda : {1.0, 0.7, 0.5, 0.35, 0.25}) {
        if (try_solve(eta, lambda, c, out)) return out;
      }
    }
  }

  // The systematic level is outside the reachable band; fold the weighted
  // level into a common shift and solve the centered remainder exactly.
  ++stats.recentered_blocks;
  c = centered(s, c);
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto eta = draw_eta();
    for (double lambda : {1.0, 0.5, 0.25, 0.125}) {
      if (try_solve(eta, lambda, c, out)) return out;
    }
    ++stats.eta_redraws;
  }

  // Flat wage shape: a = 0, d = centered c is always an exact solution.
  ++stats.trivial_blocks;
  out.wage_shape.assign(R, 0.0);
  out.systematic = c;
  return out;
}

}  // namespace

PanelDataset generate(const SyntheticConfig& config) {
  GenerationStats stats;
  return generate(config, stats);
}

PanelDataset generate(const SyntheticConfig& config, GenerationStats& stats) {
  config.validate();
  const int R = config.n_regions;
  const int J = config.n_industries;
  const int T = config.n_years;
  const auto& phi = config.true_phi;
  const auto& base = config.baseline;
  SplitMix64 rng(config.seed);
  stats = GenerationStats{};

  auto idx = [&](int r, int j, int t) { return (r * J + j) * T + t; };

  // State arrays. share is the within-industry share of each region.
  std::vector<double> share(static_cast<std::size_t>(R) * J * T, 0.0);
  std::vector<double> ind_level(static_cast<std::size_t>(J) * T, 0.0);
  std::vector<double> wage_rate(static_cast<std::size_t>(R) * J * T, 0.0);
  std::vector<double> flow(static_cast<std::size_t>(R) * T, 0.0);
  std::vector<double> region_total(static_cast<std::size_t>(R) * T, 0.0);
  std::vector<double> national_total(T, 0.0);

  // Initial shares and industry sizes.
  for (int j = 0; j < J; ++j) {
    std::vector<double> raw(R);
    double sum = 0.0;
    for (int r = 0; r < R; ++r) {
      raw[r] = std::exp(base.share_dispersion * rng.next_normal());
      sum += raw[r];
    }
    for (int r = 0; r < R; ++r) share[idx(r, j, 0)] = raw[r] / sum;
  }
  for (int j = 0; j < J; ++j)
    ind_level[j * T + 0] = base.employment * R * std::exp(0.5 * rng.next_normal());

  // Flow paths (per region; replicated over industries when written out).
  for (int r = 0; r < R; ++r) flow[r * T + 0] = base.flow * std::exp(0.5 * rng.next_normal());
  for (int t = 1; t < T; ++t)
    for (int r = 0; r < R; ++r)
      flow[r * T + t] = config.flow_mode == FlowMode::Static
                            ? flow[r * T + 0]
                            : flow[r * T + t - 1] * std::exp(base.flow_shock * rng.next_normal());

  // Non-manufacturing remainder: region-specific multiplier with a mild
  // per-year wobble so economy totals are not an exact multiple of
  // manufacturing (that would make x3 and x4 collinear).
  std::vector<double> remainder_mult(R);
  for (int r = 0; r < R; ++r)
    remainder_mult[r] = base.nonmanufacturing_multiplier * std::exp(0.12 * rng.next_normal());
  std::vector<double> remainder_wobble(static_cast<std::size_t>(R) * T);
  for (int r = 0; r < R; ++r)
    for (int t = 0; t < T; ++t) remainder_wobble[r * T + t] = std::exp(0.02 * rng.next_normal());

  // Wage rates get placeholder draws everywhere; the balance solve
  // overwrites the years that feed the wage regressor.
  for (int r = 0; r < R; ++r)
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t)
        wage_rate[idx(r, j, t)] = base.wage * std::exp(base.wage_shape * rng.next_normal());

  auto employment_at = [&](int r, int j, int t) { return share[idx(r, j, t)] * ind_level[j * T + t]; };
  auto fill_totals = [&](int t) {
    double national = 0.0;
    for (int r = 0; r < R; ++r) {
      double man = 0.0;
      for (int j = 0; j < J; ++j) man += employment_at(r, j, t);
      region_total[r * T + t] = man * (1.0 + remainder_mult[r] * remainder_wobble[r * T + t]);
      national += region_total[r * T + t];
    }
    national_total[t] = national;
  };
  fill_totals(0);

  const int first_feature_t = config.flow_mode == FlowMode::Lagged ? 2 : 1;

  // Pre-sample years evolve with unconstrained centered growth.
  for (int t = 1; t < std::min(first_feature_t, T); ++t) {
    for (int j = 0; j < J; ++j) {
      std::vector<double> s_prev(R), growth(R);
      for (int r = 0; r < R; ++r) {
        s_prev[r] = share[idx(r, j, t - 1)];
        growth[r] = base.share_shock * rng.next_normal();
      }
      double norm = lse(s_prev, growth);
      for (int r = 0; r < R; ++r) share[idx(r, j, t)] = s_prev[r] * std::exp(growth[r] - norm);
      ind_level[j * T + t] =
          ind_level[j * T + t - 1] * std::exp(base.industry_growth * rng.next_normal());
    }
    fill_totals(t);
  }

  // Unit effects, optionally correlated with the agglomeration regressor as
  // observed just before the first feature year.
  const int u_state_t = std::min(first_feature_t, T) - 1;
  std::vector<double> u(static_cast<std::size_t>(R) * J, 0.0);
  {
    std::vector<double> x4_base(static_cast<std::size_t>(R) * J);
    for (int j = 0; j < J; ++j) {
      double nat_ind = 0.0;
      for (int r = 0; r < R; ++r) nat_ind += employment_at(r, j, u_state_t);
      for (int r = 0; r < R; ++r) {
        double reg_share = employment_at(r, j, u_state_t) / region_total[r * T + u_state_t];
        double nat_share = nat_ind / national_total[u_state_t];
        x4_base[r * J + j] = std::log(reg_share / nat_share);
      }
    }
    double mean = 0.0, var = 0.0;
    for (double v : x4_base) mean += v;
    mean /= x4_base.size();
    for (double v : x4_base) var += (v - mean) * (v - mean);
    var /= x4_base.size();
    const double sd = std::sqrt(var);
    const double rho = config.effect_correlation;
    for (int r = 0; r < R; ++r)
      for (int j = 0; j < J; ++j) {
        double z = rng.next_normal();
        double structured = sd > 1e-14 ? (x4_base[r * J + j] - mean) / sd : 0.0;
        u[r * J + j] = config.sigma_u * (rho * structured + std::sqrt(1.0 - rho * rho) * z);
      }
  }

  // Feature-era years: impose the growth equation exactly.
  for (int t = first_feature_t; t < T; ++t) {
    for (int j = 0; j < J; ++j) {
      std::vector<double> s_prev(R);
      for (int r = 0; r < R; ++r) s_prev[r] = share[idx(r, j, t - 1)];

      // Regressors dated t-1 (weights one period earlier for lagged flows),
      // mirroring the feature construction.
      const int lag = t - 1;
      const int flow_t = config.flow_mode == FlowMode::Lagged ? lag : 0;
      const int weight_t = config.flow_mode == FlowMode::Lagged ? lag - 1 : lag;

      double nat_ind_lag = 0.0, nat_ind_weight = 0.0;
      for (int r = 0; r < R; ++r) {
        nat_ind_lag += employment_at(r, j, lag);
        nat_ind_weight += employment_at(r, j, weight_t);
      }
      double weighted_flow = 0.0;
      for (int r = 0; r < R; ++r) {
        double w = config.omega == OmegaWeights::EmploymentShare
                       ? employment_at(r, j, weight_t) / nat_ind_weight
                       : 1.0 / R;
        weighted_flow += w * flow[r * T + flow_t];
      }

      double nat_man = 0.0;
      for (int jj = 0; jj < J; ++jj)
        for (int r = 0; r < R; ++r) nat_man += employment_at(r, jj, lag);

      double nat_conc = 0.0, nat_own = 0.0;
      for (int jj = 0; jj < J; ++jj) {
        double nat_jj = 0.0;
        for (int r = 0; r < R; ++r) nat_jj += employment_at(r, jj, lag);
        double s_nat = nat_jj / national_total[lag];
        nat_conc += s_nat * s_nat;
        if (jj == j) nat_own = s_nat * s_nat;
      }

      std::vector<double> c(R);
      for (int r = 0; r < R; ++r) {
        double x2 = std::log(flow[r * T + flow_t] / weighted_flow);

        double man_r = 0.0, reg_conc = 0.0;
        for (int jj = 0; jj < J; ++jj) {
          double e = employment_at(r, jj, lag);
          man_r += e;
          double sh = e / region_total[r * T + lag];
          reg_conc += sh * sh;
        }
        double own = employment_at(r, j, lag);
        double x3 = std::log((man_r / own) / (nat_man / nat_ind_lag));

        double reg_share = own / region_total[r * T + lag];
        double nat_share = nat_ind_lag / national_total[lag];
        double x4 = std::log(reg_share / nat_share);

        double x5 = std::log((reg_conc - reg_share * reg_share) / (nat_conc - nat_own));

        c[r] = (config.intercept ? phi[0] : 0.0) + phi[2] * x2 + phi[3] * x3 + phi[4] * x4 +
               phi[5] * x5;
        if (!std::isfinite(c[r]))
          throw Error(ErrorKind::DegenerateState,
                      "non-finite systematic part at year index " + std::to_string(t));
      }

      BalanceSolution balance =
          solve_balance(s_prev, c, phi[1], base.wage_shape, rng, stats);

      // Target growth: systematic part + unit effect + noise, recentered so
      // the shares stay a proper within-industry distribution. The
      // recentering touches only the effect and noise terms (the systematic
      // part is balanced already), which is the demeaned-error structure of
      // the estimated equation.
      std::vector<double> g(R);
      for (int r = 0; r < R; ++r) g[r] = balance.systematic[r] + u[r * J + j] + config.sigma_e * rng.next_normal();
      double shift = lse(s_prev, g);
      for (int r = 0; r < R; ++r) {
        double dep = g[r] - shift;
        double next = s_prev[r] * std::exp(dep);
        if (!(next > 1e-14) || !std::isfinite(next))
          throw Error(ErrorKind::DegenerateState,
                      "share of region index " + std::to_string(r) + " industry index " +
                          std::to_string(j) + " driven to " + std::to_string(next) +
                          " at year index " + std::to_string(t));
        share[idx(r, j, t)] = next;
      }

      for (int r = 0; r < R; ++r)
        wage_rate[idx(r, j, lag)] = base.wage * std::exp(balance.wage_shape[r]);

      ind_level[j * T + t] =
          ind_level[j * T + t - 1] * std::exp(base.industry_growth * rng.next_normal());
    }
    fill_totals(t);
  }

  // Assemble the dataset.
  std::vector<PanelObservation> observations;
  observations.reserve(static_cast<std::size_t>(R) * J * T);
  for (int r = 0; r < R; ++r)
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t) {
        PanelObservation obs;
        obs.region.code = axis_code("R", r, R);
        obs.industry.code = axis_code("I", j, J);
        obs.year = config.start_year + t;
        obs.employment = employment_at(r, j, t);
        obs.wage_bill = wage_rate[idx(r, j, t)] * obs.employment;
        obs.goods_flow = flow[r * T + t];
        if (!(obs.employment > 0.0) || !std::isfinite(obs.employment) ||
            !(obs.wage_bill > 0.0) || !std::isfinite(obs.wage_bill))
          throw Error(ErrorKind::DegenerateState,
                      "degenerate level at (" + obs.region.code + ", " + obs.industry.code +
                          ", " + std::to_string(obs.year) + ")");
        observations.push_back(std::move(obs));
      }

  std::map<std::pair<std::string, int>, double> region_totals;
  std::map<int, double> national_totals;
  for (int r = 0; r < R; ++r)
    for (int t = 0; t < T; ++t)
      region_totals[{axis_code("R", r, R), config.start_year + t}] = region_total[r * T + t];
  for (int t = 0; t < T; ++t) national_totals[config.start_year + t] = national_total[t];

  int core = 0;
  for (int r = 1; r < R; ++r)
    if (flow[r * T + 0] > flow[core * T + 0]) core = r;

  return PanelDataset::checked(std::move(observations), std::move(region_totals),
                               std::move(national_totals), RegionId{axis_code("R", core, R)});
}

MonteCarloSummary monte_carlo(const SyntheticConfig& config, int replications) {
  if (replications < 1) throw Error(ErrorKind::ConfigError, "replications must be >= 1");

  const std::vector<std::string> slopes = {"x1", "x2", "x3", "x4", "x5"};
  const std::vector<Method> methods = {Method::LSDV, Method::FD, Method::RE};

  struct Accumulator {
    std::vector<double> estimates;
    int covered = 0;
  };
  std::vector<std::vector<Accumulator>> acc(methods.size(),
                                            std::vector<Accumulator>(slopes.size()));
  double hausman_sum = 0.0;
  int hausman_rejections = 0;

  ModelSpec lsdv_spec;
  lsdv_spec.flow_mode = config.flow_mode;
  lsdv_spec.omega = config.omega;
  ModelSpec re_spec = lsdv_spec;
  re_spec.intercept = true;
  re_spec.dummies = ModelSpec::Dummies::None;

  for (int rep = 0; rep < replications; ++rep) {
    SyntheticConfig draw = config;
    draw.seed = config.seed + static_cast<std::uint64_t>(rep);
    PanelDataset panel = generate(draw);
    FeatureTable features = build_features(panel, FeatureOptions::from_spec(lsdv_spec));

    DesignMatrix lsdv_design = assemble_design(features, lsdv_spec);
    DesignMatrix re_design = assemble_design(features, re_spec);

    EstimationResult results[3] = {estimate_lsdv(lsdv_design, lsdv_spec),
                                   estimate_fd(features, lsdv_spec),
                                   estimate_re(re_design, re_spec)};

    for (std::size_t m = 0; m < methods.size(); ++m)
      for (std::size_t k = 0; k < slopes.size(); ++k) {
        const Coefficient* c = results[m].find(slopes[k]);
        if (!c) continue;
        acc[m][k].estimates.push_back(c->estimate);
        const double truth = config.true_phi[k + 1];
        if (c->std_error > 0.0 && std::abs(c->estimate - truth) <= 1.96 * c->std_error)
          ++acc[m][k].covered;
      }

    HausmanResult hausman = hausman_test(results[0], results[2], slopes);
    hausman_sum += hausman.statistic;
    if (hausman.statistic > chi_square_critical_95(hausman.dof)) ++hausman_rejections;
  }

  MonteCarloSummary summary;
  summary.replications = replications;
  summary.hausman_mean = hausman_sum / replications;
  summary.hausman_rejection_rate = static_cast<double>(hausman_rejections) / replications;
  summary.hausman_dof = static_cast<int>(slopes.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    EstimatorSummary es;
    es.method = methods[m];
    for (std::size_t k = 0; k < slopes.size(); ++k) {
      const auto& a = acc[m][k];
      CoefficientStats cs;
      cs.symbol = slopes[k];
      cs.truth = config.true_phi[k + 1];
      const int n = static_cast<int>(a.estimates.size());
      if (n > 0) {
        double mean = 0.0;
        for (double v : a.estimates) mean += v;
        mean /= n;
        double var = 0.0, mse = 0.0;
        for (double v : a.estimates) {
          var += (v - mean) * (v - mean);
          mse += (v - cs.truth) * (v - cs.truth);
        }
        cs.mean = mean;
        cs.sd = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
        cs.bias = mean - cs.truth;
        cs.rmse = std::sqrt(mse / n);
        cs.coverage = static_cast<double>(a.covered) / n;
      }
      es.slopes.push_back(cs);
    }
    summary.estimators.push_back(std::move(es));
  }
  return summary;
}

}  // namespace regemp
