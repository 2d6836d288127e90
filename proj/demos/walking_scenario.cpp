// Library walkthrough: the walking-scale mixing scenario end to end.
// Simulated success/risk across timeouts next to the compartmental-model
// predictions, then the optimal timeout both ways.

#include <cstdio>

#include "epidemica/analytic.hpp"
#include "epidemica/engine.hpp"
#include "epidemica/optimizer.hpp"

int main() {
  using namespace epidemica;

  const int n_nodes = 100;
  const double aggregate_rate = 0.37043;  // per hour
  const std::uint64_t trials = 10000;
  const std::uint64_t master_seed = 7;

  const FullyMixedSource source =
      FullyMixedSource::from_aggregate_rate(n_nodes, aggregate_rate, 40.0);
  AttackConfig attack;
  attack.seed_rule = SeedRule::random(1);
  attack.target_rule = TargetRule::random_distinct();
  attack.p_proximity = 1.0;

  const EpidemicParams params{n_nodes, aggregate_rate / n_nodes, 0.0, 1};

  std::printf("%6s %12s %12s %14s %12s\n", "T_G", "mc success", "model cdf", "mc risk->T_G",
              "model risk");
  const std::vector<double> grid{5, 10, 15, 20, 25, 30};
  const auto curve = tradeoff_curve(source, attack, grid, trials, master_seed);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::printf("%6.1f %12.4f %12.4f %14.3f %12.3f\n", grid[i], curve[i].success_rate,
                target_success_cdf(params, grid[i]), curve[i].mean_risk_to_timeout,
                expected_risk(params, grid[i]));
  }

  const double rho = 0.95;
  const MinTimeoutResult mc = min_timeout_mc(source, attack, rho, trials, master_seed);
  std::printf("\ntimeout for %.0f%% reliability: model %.2f h, simulated %.2f h\n", 100 * rho,
              optimal_timeout(params, rho), mc.timeout_h);
  std::printf("risk at the model-optimal timeout: %.3f h per user\n",
              expected_risk(params, optimal_timeout(params, rho)));
  return 0;
}
