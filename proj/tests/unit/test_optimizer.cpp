#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "epidemica/optimizer.hpp"

using namespace epidemica;
using Catch::Approx;

namespace {

FixedStreamSource chain_source() {
  ExposureStream s;
  s.n_nodes = 3;
  s.horizon_h = 5.0;
  s.events = {{1.0, 0, 1, Channel::proximity, 1}, {2.0, 1, 2, Channel::proximity, 2}};
  return FixedStreamSource(std::move(s));
}

AttackConfig chain_attack() {
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::fixed({0});
  cfg.target_rule = TargetRule::fixed(2);
  cfg.p_proximity = 1.0;
  return cfg;
}

}  // namespace

TEST_CASE("tradeoff curve rejects bad grids") {
  const FixedStreamSource source = chain_source();
  REQUIRE_THROWS_AS(tradeoff_curve(source, chain_attack(), {}, 1, 0), config_error);
  REQUIRE_THROWS_AS(tradeoff_curve(source, chain_attack(), {2.0, 1.0}, 1, 0), config_error);
  REQUIRE_THROWS_AS(tradeoff_curve(source, chain_attack(), {1.0, 1.0}, 1, 0), config_error);
}

TEST_CASE("tradeoff curve on the scripted chain") {
  const FixedStreamSource source = chain_source();
  const auto curve = tradeoff_curve(source, chain_attack(), {1.5, 2.5}, 4, 99);
  REQUIRE(curve.size() == 2);
  REQUIRE(curve[0].success_rate == 0.0);
  REQUIRE(curve[1].success_rate == 1.0);
  REQUIRE(curve[0].mean_risk == Approx(2.0 / 3.0));
  REQUIRE(curve[1].mean_risk == Approx(1.0));
}

TEST_CASE("zero timeout with an unreachable target never succeeds") {
  const FixedStreamSource source = chain_source();
  const auto curve = tradeoff_curve(source, chain_attack(), {0.0}, 16, 3);
  REQUIRE(curve[0].success_rate == 0.0);
}

TEST_CASE("coupled curve is exactly monotone in both columns") {
  const FullyMixedSource source(25, 0.015, 40.0);
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::random(1);
  cfg.target_rule = TargetRule::random_distinct();
  const auto curve =
      tradeoff_curve(source, cfg, {5.0, 10.0, 15.0, 20.0, 30.0, 40.0}, 300, 1234);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    REQUIRE(curve[i].success_rate >= curve[i - 1].success_rate);
    REQUIRE(curve[i].mean_risk >= curve[i - 1].mean_risk - 1e-12);
    REQUIRE(curve[i].mean_risk_to_timeout >= curve[i - 1].mean_risk_to_timeout - 1e-12);
  }
  REQUIRE(curve.back().success_rate > curve.front().success_rate);
}

TEST_CASE("min timeout: boundary, quantile law and monotonicity in rho") {
  const double rate = 0.2;
  const FullyMixedSource source(2, rate, 120.0);
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::fixed({0});
  cfg.target_rule = TargetRule::fixed(1);

  const MinTimeoutResult zero = min_timeout_mc(source, cfg, 0.0, 50, 7);
  REQUIRE(zero.attainable);
  REQUIRE(zero.timeout_h == 0.0);

  // Exponential hit law: the rho-quantile is ln(1/(1-rho))/rate.
  const std::uint64_t trials = 6000;
  double prev = 0.0;
  for (double rho : {0.5, 0.9, 0.95}) {
    const MinTimeoutResult r = min_timeout_mc(source, cfg, rho, trials, 7);
    REQUIRE(r.attainable);
    const double expected = std::log(1.0 / (1.0 - rho)) / rate;
    INFO("rho=" << rho << " mc=" << r.timeout_h << " expected=" << expected);
    REQUIRE(r.timeout_h == Approx(expected).epsilon(0.12));
    REQUIRE(r.timeout_h >= prev);
    prev = r.timeout_h;
  }
}

TEST_CASE("min timeout reports unattainable targets with the achieved maximum") {
  // Short horizon: with rate 0.05/h and 4 hours, most trials never hit.
  const FullyMixedSource source(2, 0.05, 4.0);
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::fixed({0});
  cfg.target_rule = TargetRule::fixed(1);
  const MinTimeoutResult r = min_timeout_mc(source, cfg, 0.95, 400, 21);
  REQUIRE(!r.attainable);
  REQUIRE(r.achieved_max_success < 0.5);
  REQUIRE(r.achieved_max_success > 0.0);
}

TEST_CASE("config search: infinite budget picks the maximal corner") {
  const FullyMixedSource source(12, 0.05, 12.0);
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::fixed({0});
  cfg.target_rule = TargetRule::fixed(5);
  cfg.global_timeout_h = 12.0;
  const std::vector<double> ps{0.0, 0.4};
  const std::vector<double> pl{0.1, 0.8};
  const ConfigSearchResult r = constrained_config_search(
      source, cfg, ps, pl, std::numeric_limits<double>::infinity(), 200, 5);
  REQUIRE(r.best_index.has_value());
  // Coupled dominance: no cell can beat the (max, max) corner.
  const ConfigSearchCell& corner = r.grid[3];
  REQUIRE(r.best()->success_rate == corner.success_rate);
  for (const ConfigSearchCell& c : r.grid) REQUIRE(c.feasible);
}

TEST_CASE("config search matches exhaustive brute force on a scripted stream") {
  const FixedStreamSource source = chain_source();
  AttackConfig cfg = chain_attack();
  cfg.global_timeout_h = 4.0;
  const std::vector<double> ps{0.0, 0.5};
  const std::vector<double> pl{0.3, 0.9};
  const std::uint64_t trials = 64;
  const std::uint64_t seed = 31337;
  const double budget = 0.7;

  const ConfigSearchResult r =
      constrained_config_search(source, cfg, ps, pl, budget, trials, seed);

  // Brute force: evaluate each cell independently and re-apply the selection
  // rule by hand. The budgeted risk is the to-timeout exposure integral.
  struct Cell {
    double ps, pl, success, risk;
    bool feasible;
  };
  std::vector<Cell> cells;
  for (double a : ps) {
    for (double b : pl) {
      AttackConfig c = cfg;
      c.p_social = a;
      c.p_proximity = b;
      const MonteCarloSummary s = run_monte_carlo(source, c, trials, seed);
      cells.push_back({a, b, s.success_rate, s.mean_risk_to_timeout,
                       s.mean_risk_to_timeout <= budget});
    }
  }
  REQUIRE(cells.size() == r.grid.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    REQUIRE(cells[i].success == r.grid[i].success_rate);
    REQUIRE(cells[i].risk == r.grid[i].mean_risk);
    REQUIRE(cells[i].feasible == r.grid[i].feasible);
  }
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].feasible) continue;
    if (!best || cells[i].success > cells[*best].success ||
        (cells[i].success == cells[*best].success && cells[i].risk < cells[*best].risk)) {
      best = i;
    }
  }
  REQUIRE(best == r.best_index);
}

TEST_CASE("config search: a budget between the corner risks forces a compromise") {
  const FullyMixedSource source(15, 0.04, 15.0);
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::fixed({0});
  cfg.target_rule = TargetRule::fixed(9);
  cfg.global_timeout_h = 15.0;
  const std::vector<double> ps{0.0};
  const std::vector<double> pl{0.2, 1.0};
  const std::uint64_t trials = 400;

  const ConfigSearchResult open = constrained_config_search(
      source, cfg, ps, pl, std::numeric_limits<double>::infinity(), trials, 11);
  const double low_risk = open.grid[0].mean_risk;
  const double high_risk = open.grid[1].mean_risk;
  REQUIRE(high_risk > low_risk);

  const double budget = 0.5 * (low_risk + high_risk);
  const ConfigSearchResult capped =
      constrained_config_search(source, cfg, ps, pl, budget, trials, 11);
  REQUIRE(capped.best_index.has_value());
  REQUIRE(capped.best()->p_proximity == 0.2);  // the maximal corner is out of budget
  REQUIRE(capped.best()->mean_risk <= budget);

  // Budget monotonicity: widening the budget never lowers the achieved success.
  const ConfigSearchResult wide = constrained_config_search(
      source, cfg, ps, pl, high_risk + 1.0, trials, 11);
  REQUIRE(wide.best()->success_rate >= capped.best()->success_rate);
}

TEST_CASE("config search: empty feasible set is reported, not thrown") {
  const FixedStreamSource source = chain_source();
  AttackConfig cfg = chain_attack();
  cfg.global_timeout_h = 4.0;
  const ConfigSearchResult r =
      constrained_config_search(source, cfg, {0.0}, {1.0}, 0.0, 8, 2);
  REQUIRE(!r.best_index.has_value());
  REQUIRE(r.best() == nullptr);
  REQUIRE(!r.grid.empty());
}

TEST_CASE("config search: coupled surfaces are coordinatewise monotone") {
  const FullyMixedSource source(15, 0.03, 20.0);
  AttackConfig cfg;
  cfg.seed_rule = SeedRule::random(1);
  cfg.target_rule = TargetRule::random_distinct();
  cfg.global_timeout_h = 20.0;
  const std::vector<double> ps{0.0, 0.3, 0.8};
  const std::vector<double> pl{0.1, 0.5, 1.0};
  const ConfigSearchResult r = constrained_config_search(
      source, cfg, ps, pl, std::numeric_limits<double>::infinity(), 250, 777);
  const auto at = [&](std::size_t i, std::size_t j) -> const ConfigSearchCell& {
    return r.grid[i * 3 + j];
  };
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i > 0) {
        REQUIRE(at(i, j).success_rate >= at(i - 1, j).success_rate);
        REQUIRE(at(i, j).mean_risk >= at(i - 1, j).mean_risk - 1e-12);
      }
      if (j > 0) {
        REQUIRE(at(i, j).success_rate >= at(i, j - 1).success_rate);
        REQUIRE(at(i, j).mean_risk >= at(i, j - 1).mean_risk - 1e-12);
      }
    }
  }
}

TEST_CASE("csv exports carry the pinned schemas") {
  std::vector<TradeoffPoint> curve{{10.0, 0.5, 0.4, 0.6, 1.5, 2.0}};
  REQUIRE(to_csv(curve) == "tg,success,wilson_lo,wilson_hi,risk\n10,0.5,0.4,0.6,2\n");
  ConfigSearchResult r;
  r.grid = {{0.05, 0.1, 0.25, 3.5, true}};
  REQUIRE(to_csv(r) == "ps,pl,success,risk,feasible\n0.05,0.1,0.25,3.5,1\n");
}
