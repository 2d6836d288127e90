#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "epidemica/engine.hpp"
#include "epidemica/io.hpp"

namespace epidemica {

struct TradeoffPoint {
  double timeout_h = 0.0;
  double success_rate = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double mean_risk = 0.0;
  double mean_risk_to_timeout = 0.0;
};

// One Monte Carlo summary per grid timeout, all runs sharing (master_seed,
// trial ids). Under the engine's coupled draws the success column is exactly
// non-decreasing along the grid, not just on average.
inline std::vector<TradeoffPoint> tradeoff_curve(const ScenarioSource& scenario,
                                                 const AttackConfig& cfg,
                                                 const std::vector<double>& timeout_grid,
                                                 std::uint64_t trials, std::uint64_t master_seed,
                                                 const MonteCarloOptions& opts = {}) {
  if (timeout_grid.empty()) throw config_error("tradeoff_curve: empty timeout grid");
  for (std::size_t i = 1; i < timeout_grid.size(); ++i) {
    if (!(timeout_grid[i] > timeout_grid[i - 1]))
      throw config_error("tradeoff_curve: timeout grid must be strictly increasing");
  }
  std::vector<TradeoffPoint> curve;
  curve.reserve(timeout_grid.size());
  for (double tg : timeout_grid) {
    AttackConfig point_cfg = cfg;
    point_cfg.global_timeout_h = tg;
    const MonteCarloSummary s = run_monte_carlo(scenario, point_cfg, trials, master_seed, opts);
    curve.push_back({tg, s.success_rate, s.wilson_lo, s.wilson_hi, s.mean_risk,
                     s.mean_risk_to_timeout});
  }
  return curve;
}

inline constexpr const char* kTradeoffCsvHeader = "tg,success,wilson_lo,wilson_hi,risk";

// The exported `risk` column is the exposure integral carried to the timeout
// (the reading that grows monotonically with the timeout and with the channel
// probabilities); the stopped-at-hit integral stays available on the points.
inline std::string to_csv(const std::vector<TradeoffPoint>& curve) {
  std::string out = kTradeoffCsvHeader;
  out += '\n';
  for (const TradeoffPoint& p : curve) {
    out += format_double(p.timeout_h);
    out += ',';
    out += format_double(p.success_rate);
    out += ',';
    out += format_double(p.wilson_lo);
    out += ',';
    out += format_double(p.wilson_hi);
    out += ',';
    out += format_double(p.mean_risk_to_timeout);
    out += '\n';
  }
  return out;
}

struct MinTimeoutResult {
  bool attainable = false;
  double timeout_h = 0.0;            // valid when attainable
  double achieved_max_success = 0.0; // success rate with the timeout maxed out
  std::uint64_t trials = 0;
};

// Monte Carlo counterpart of the optimal timeout. One pass with the timeout
// effectively disabled collects the per-trial hit times; by exact coupled
// monotonicity in the timeout, the reliability quantile of that distribution
// (failures counted as +infinity) IS the smallest timeout achieving the
// target empirically -- no bisection over repeated runs, no grid.
inline MinTimeoutResult min_timeout_mc(const ScenarioSource& scenario, const AttackConfig& cfg,
                                       double reliability, std::uint64_t trials,
                                       std::uint64_t master_seed,
                                       const MonteCarloOptions& opts = {}) {
  if (!(reliability >= 0.0 && reliability < 1.0))
    throw infeasible_error("min_timeout_mc: reliability must lie in [0,1)");

  AttackConfig open_cfg = cfg;
  open_cfg.global_timeout_h = std::numeric_limits<double>::infinity();
  MonteCarloOptions run_opts = opts;
  run_opts.keep_per_trial = true;
  const MonteCarloSummary s = run_monte_carlo(scenario, open_cfg, trials, master_seed, run_opts);

  std::vector<double> hit_times;
  hit_times.reserve(s.per_trial.size());
  for (const TrialOutcome& o : s.per_trial) {
    hit_times.push_back(o.t_hit_h ? *o.t_hit_h : std::numeric_limits<double>::infinity());
  }
  std::sort(hit_times.begin(), hit_times.end());

  MinTimeoutResult result;
  result.trials = trials;
  result.achieved_max_success = s.success_rate;
  if (reliability == 0.0) {
    result.attainable = true;
    result.timeout_h = 0.0;
    return result;
  }
  const auto k = static_cast<std::size_t>(std::ceil(reliability * static_cast<double>(trials) - 1e-9));
  const double q = hit_times[std::min(k, hit_times.size()) - 1];
  if (std::isfinite(q)) {
    result.attainable = true;
    result.timeout_h = q;
  }
  return result;
}

struct ConfigSearchCell {
  double p_social = 0.0;
  double p_proximity = 0.0;
  double success_rate = 0.0;
  // Exposure integral to the timeout. The stopped-at-hit reading would shrink
  // as the channels get stronger (earlier hits cut accrual short) and cannot
  // express "more aggressive costs more"; this one is coordinatewise monotone
  // under coupled draws.
  double mean_risk = 0.0;
  bool feasible = false;
};

struct ConfigSearchResult {
  std::vector<ConfigSearchCell> grid;  // row-major, p_social outer, p_proximity inner
  std::size_t n_social = 0;
  std::size_t n_proximity = 0;
  std::optional<std::size_t> best_index;  // empty when no cell meets the budget
  double risk_budget_h = std::numeric_limits<double>::infinity();

  const ConfigSearchCell* best() const {
    return best_index ? &grid[*best_index] : nullptr;
  }
};

// Coupled grid evaluation of the (p_social, p_proximity) configuration space
// under a risk budget. All cells share trial seeds, so both surfaces are
// coordinatewise non-decreasing by construction. Returns the feasible cell
// with maximal success; ties break toward smaller risk, then smaller
// (p_social, p_proximity) lexicographically. An empty feasible set is a
// reported outcome, not an error.
inline ConfigSearchResult constrained_config_search(const ScenarioSource& scenario,
                                                    const AttackConfig& base_cfg,
                                                    const std::vector<double>& p_social_grid,
                                                    const std::vector<double>& p_proximity_grid,
                                                    double risk_budget_h, std::uint64_t trials,
                                                    std::uint64_t master_seed,
                                                    const MonteCarloOptions& opts = {}) {
  if (p_social_grid.empty() || p_proximity_grid.empty())
    throw config_error("config search: grids must be non-empty");
  if (!(risk_budget_h >= 0.0)) throw config_error("config search: risk budget must be >= 0");

  ConfigSearchResult result;
  result.n_social = p_social_grid.size();
  result.n_proximity = p_proximity_grid.size();
  result.risk_budget_h = risk_budget_h;
  result.grid.reserve(p_social_grid.size() * p_proximity_grid.size());

  for (double ps : p_social_grid) {
    for (double pl : p_proximity_grid) {
      AttackConfig cfg = base_cfg;
      cfg.p_social = ps;
      cfg.p_proximity = pl;
      const MonteCarloSummary s = run_monte_carlo(scenario, cfg, trials, master_seed, opts);
      ConfigSearchCell cell{ps, pl, s.success_rate, s.mean_risk_to_timeout,
                            s.mean_risk_to_timeout <= risk_budget_h};
      result.grid.push_back(cell);
    }
  }
  for (std::size_t i = 0; i < result.grid.size(); ++i) {
    const ConfigSearchCell& c = result.grid[i];
    if (!c.feasible) continue;
    if (!result.best_index) {
      result.best_index = i;
      continue;
    }
    const ConfigSearchCell& b = result.grid[*result.best_index];
    const bool better = c.success_rate > b.success_rate ||
                        (c.success_rate == b.success_rate && c.mean_risk < b.mean_risk);
    // Row-major iteration already visits smaller (p_social, p_proximity)
    // first, so equal cells never displace the incumbent.
    if (better) result.best_index = i;
  }
  return result;
}

inline constexpr const char* kConfigSearchCsvHeader = "ps,pl,success,risk,feasible";

inline std::string to_csv(const ConfigSearchResult& r) {
  std::string out = kConfigSearchCsvHeader;
  out += '\n';
  for (const ConfigSearchCell& c : r.grid) {
    out += format_double(c.p_social);
    out += ',';
    out += format_double(c.p_proximity);
    out += ',';
    out += format_double(c.success_rate);
    out += ',';
    out += format_double(c.mean_risk);
    out += ',';
    out += c.feasible ? '1' : '0';
    out += '\n';
  }
  return out;
}

}  // namespace epidemica
