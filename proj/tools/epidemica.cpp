// Command-line front end: scenario files in, plot-ready CSV/JSON out.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epidemica/analytic.hpp"
#include "epidemica/engine.hpp"
#include "epidemica/io.hpp"
#include "epidemica/mobility.hpp"
#include "epidemica/optimizer.hpp"
#include "epidemica/scenario.hpp"
#include "epidemica/traces.hpp"

namespace {

using namespace epidemica;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

std::string digest_comment(const std::string& digest) {
  return "# config_digest=" + digest + "\n";
}

std::vector<double> parse_grid(const std::string& spec) {
  // "a:b:step" inclusive ranges or "x,y,z" explicit lists.
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw config_error("grid '" + spec + "': expected a:b:step");
    const double a = parse_double(std::string_view(spec).substr(0, c1));
    const double b = parse_double(std::string_view(spec).substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_double(std::string_view(spec).substr(c2 + 1));
    if (!(step > 0.0) || b < a) throw config_error("grid '" + spec + "': need a <= b, step > 0");
    for (double x = a; x <= b + 1e-9 * step; x += step) out.push_back(x);
    return out;
  }
  for (std::string_view field : split_csv_line(spec)) out.push_back(parse_double(field));
  return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_gen_trace(const std::string& config_path, const std::string& out_path) {
  const ScenarioConfig cfg = load_scenario_file(config_path);
  if (cfg.source_kind != ScenarioConfig::SourceKind::mobility)
    throw config_error("gen-trace requires a mobility contact source");
  std::vector<std::string> warnings;
  const ContactTrace trace = generate_contact_trace(cfg.mobility, &warnings);
  print_warnings(warnings);
  write_file_atomic(out_path, digest_comment(cfg.digest) + to_csv(trace));
  std::cout << "trace: " << trace.events.size() << " contacts, " << trace.n_nodes << " nodes, "
            << format_double(trace.duration_h) << " h -> " << out_path << "\n";
  return kExitOk;
}

int cmd_estimate_rate(const std::string& trace_path, const std::string& config_path) {
  auto imported = import_contact_csv(read_file(trace_path));
  print_warnings(imported.warnings);
  const MeetingRateEstimate est = estimate_pairwise_meeting_rate(imported.value);
  std::cout << "empirical_rate_per_pair_h=" << format_double(est.rate_per_pair_h)
            << " contact_starts=" << est.contact_starts
            << " mean_inter_meeting_h=" << format_double(est.mean_inter_meeting_h) << "\n";
  if (!config_path.empty()) {
    const ScenarioConfig cfg = load_scenario_file(config_path);
    if (cfg.source_kind != ScenarioConfig::SourceKind::mobility)
      throw config_error("estimate-rate --config requires a mobility contact source");
    const double formula = analytic_meeting_rate(cfg.mobility);
    std::cout << "analytic_rate_per_pair_h=" << format_double(formula)
              << " ratio_empirical_to_analytic="
              << format_double(est.rate_per_pair_h / formula) << "\n";
  }
  return kExitOk;
}

int cmd_attack(const std::string& config_path, std::optional<double> tg,
               const std::string& tg_grid_spec, const std::string& out_path,
               const std::string& per_trial_path) {
  const ScenarioConfig cfg = load_scenario_file(config_path);
  Scenario sc = build_scenario(cfg);
  print_warnings(sc.warnings);

  MonteCarloOptions opts;
  opts.threads = threads_from_environment();

  if (!tg_grid_spec.empty()) {
    const std::vector<double> grid = parse_grid(tg_grid_spec);
    const std::vector<TradeoffPoint> curve =
        tradeoff_curve(*sc.source, sc.attack, grid, sc.trials, sc.master_seed, opts);
    write_file_atomic(out_path, digest_comment(sc.digest) + to_csv(curve));
    std::cout << "tradeoff curve: " << curve.size() << " points -> " << out_path << "\n";
    return kExitOk;
  }

  AttackConfig attack = sc.attack;
  if (tg) attack.global_timeout_h = *tg;
  opts.keep_per_trial = !per_trial_path.empty();
  const MonteCarloSummary summary =
      run_monte_carlo(*sc.source, attack, sc.trials, sc.master_seed, opts);
  const std::string json = to_json(summary, sc.digest);
  if (out_path.empty()) {
    std::cout << json;
  } else {
    write_file_atomic(out_path, json);
    std::cout << "summary: success_rate=" << format_double(summary.success_rate) << " -> "
              << out_path << "\n";
  }
  if (!per_trial_path.empty()) {
    write_file_atomic(per_trial_path, digest_comment(sc.digest) + per_trial_csv(summary));
  }
  return kExitOk;
}

int cmd_analytic(const std::string& config_path, const std::string& model_name, double horizon,
                 double step, std::optional<double> reliability, const std::string& out_path) {
  const ScenarioConfig cfg = load_scenario_file(config_path);
  Scenario sc = build_scenario(cfg);
  print_warnings(sc.warnings);

  EpidemicModel model;
  if (model_name == "si") model = EpidemicModel::si;
  else if (model_name == "sis") model = EpidemicModel::sis;
  else if (model_name == "sir") model = EpidemicModel::sir;
  else throw config_error("analytic: model must be si|sis|sir");

  const OdeSolution sol = solve_epidemic_ode(sc.epidemic, model, horizon, step);
  if (!out_path.empty()) write_file_atomic(out_path, digest_comment(sc.digest) + to_csv(sol));

  std::cout << "aggregate_rate_per_h=" << format_double(sc.epidemic.aggregate_rate_per_h()) << "\n";
  if (sc.epidemic.recovery_rate_per_h == 0.0) {
    std::cout << "success_cdf(" << format_double(horizon)
              << ")=" << format_double(target_success_cdf(sc.epidemic, horizon)) << "\n";
    std::cout << "expected_risk(" << format_double(horizon)
              << ")=" << format_double(expected_risk(sc.epidemic, horizon)) << " h\n";
  } else {
    std::cout << "success_cdf(" << format_double(horizon)
              << ")=" << format_double(sol.target_hit_cdf.back()) << "\n";
    std::cout << "expected_risk(" << format_double(horizon)
              << ")=" << format_double(sol.cum_infected_time.back() / sc.epidemic.population)
              << " h\n";
  }
  if (model == EpidemicModel::sis) {
    std::cout << "sis_steady_state=" << format_double(sis_steady_state(sc.epidemic)) << "\n";
  }
  if (reliability) {
    std::cout << "optimal_timeout(" << format_double(*reliability)
              << ")=" << format_double(optimal_timeout(sc.epidemic, *reliability)) << " h\n";
  }
  return kExitOk;
}

int cmd_opt_timeout(const std::string& config_path, double reliability,
                    std::optional<std::uint64_t> trials_override) {
  const ScenarioConfig cfg = load_scenario_file(config_path);
  Scenario sc = build_scenario(cfg);
  print_warnings(sc.warnings);

  MonteCarloOptions opts;
  opts.threads = threads_from_environment();
  const std::uint64_t trials = trials_override.value_or(sc.trials);
  const MinTimeoutResult mc =
      min_timeout_mc(*sc.source, sc.attack, reliability, trials, sc.master_seed, opts);
  const double analytic = optimal_timeout(sc.epidemic, reliability);

  std::cout << "analytic_timeout_h=" << format_double(analytic) << "\n";
  if (mc.attainable) {
    std::cout << "mc_timeout_h=" << format_double(mc.timeout_h) << " trials=" << mc.trials << "\n";
    return kExitOk;
  }
  std::cout << "mc_timeout_h=unattainable achieved_max_success="
            << format_double(mc.achieved_max_success) << " trials=" << mc.trials << "\n";
  throw infeasible_error("reliability " + format_double(reliability) +
                         " unreachable within the scenario horizon (max " +
                         format_double(mc.achieved_max_success) + ")");
}

int cmd_opt_config(const std::string& config_path, const std::string& ps_spec,
                   const std::string& pl_spec, double risk_budget, const std::string& out_path) {
  const ScenarioConfig cfg = load_scenario_file(config_path);
  Scenario sc = build_scenario(cfg);
  print_warnings(sc.warnings);

  MonteCarloOptions opts;
  opts.threads = threads_from_environment();
  const ConfigSearchResult result =
      constrained_config_search(*sc.source, sc.attack, parse_grid(ps_spec), parse_grid(pl_spec),
                                risk_budget, sc.trials, sc.master_seed, opts);
  if (!out_path.empty()) {
    std::string body = digest_comment(sc.digest);
    body += "# risk_budget_h=" + format_double(result.risk_budget_h) + "\n";
    body += to_csv(result);
    write_file_atomic(out_path, body);
  }
  if (const ConfigSearchCell* best = result.best()) {
    std::cout << "best ps=" << format_double(best->p_social)
              << " pl=" << format_double(best->p_proximity)
              << " success=" << format_double(best->success_rate)
              << " risk=" << format_double(best->mean_risk) << " h\n";
    return kExitOk;
  }
  std::cout << "no feasible configuration under risk_budget_h="
            << format_double(result.risk_budget_h) << "\n";
  throw infeasible_error("no grid cell satisfies the risk budget");
}

int cmd_import_trace(const std::string& in_path, const std::string& out_path,
                     const std::string& map_path, std::optional<std::int32_t> n_nodes) {
  auto imported = import_contact_csv(read_file(in_path), n_nodes);
  print_warnings(imported.warnings);
  write_file_atomic(out_path, to_csv(imported.value));
  if (!map_path.empty()) write_file_atomic(map_path, id_mapping_to_csv(imported.id_mapping));
  std::cout << "imported " << imported.value.events.size() << " contacts, "
            << imported.value.n_nodes << " nodes -> " << out_path << "\n";
  return kExitOk;
}

int cmd_import_social(const std::string& in_path, const std::string& out_path,
                      const std::string& map_path, std::optional<std::int32_t> n_nodes) {
  auto imported = import_social_csv(read_file(in_path), n_nodes);
  print_warnings(imported.warnings);
  write_file_atomic(out_path, to_csv(imported.value));
  if (!map_path.empty()) write_file_atomic(map_path, id_mapping_to_csv(imported.id_mapping));
  std::cout << "imported " << imported.value.edges.size() << " edges, "
            << imported.value.n_nodes << " nodes -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epidemica: transmissive-attack simulation and epidemic-model analytics"};
  app.require_subcommand(1);

  std::string config_path, out_path, per_trial_path, trace_path, in_path, map_path;
  std::string model_name = "si", tg_grid_spec, ps_spec, pl_spec;
  double horizon = 0.0, step = 0.01, risk_budget = 0.0, reliability = 0.0;
  std::optional<double> tg_opt, reliability_opt;
  std::optional<std::uint64_t> trials_opt;
  std::optional<std::int32_t> n_nodes_opt;

  auto* gen = app.add_subcommand("gen-trace", "generate a synthetic mobility contact trace");
  gen->add_option("--config", config_path)->required();
  gen->add_option("--out", out_path)->required();

  auto* est = app.add_subcommand("estimate-rate", "empirical vs analytic pairwise meeting rate");
  est->add_option("--trace", trace_path)->required();
  est->add_option("--config", config_path);

  auto* atk = app.add_subcommand("attack", "Monte Carlo attack summary or timeout tradeoff curve");
  atk->add_option("--config", config_path)->required();
  atk->add_option("--tg", tg_opt, "global timeout override (hours)");
  atk->add_option("--tg-grid", tg_grid_spec, "timeout grid a:b:step or comma list");
  atk->add_option("--out", out_path);
  atk->add_option("--per-trial", per_trial_path);

  auto* ana = app.add_subcommand("analytic", "epidemic-model trajectories and derived quantities");
  ana->add_option("--config", config_path)->required();
  ana->add_option("--model", model_name)->check(CLI::IsMember({"si", "sis", "sir"}));
  ana->add_option("--horizon", horizon)->required();
  ana->add_option("--step", step);
  ana->add_option("--reliability", reliability_opt);
  ana->add_option("--out", out_path);

  auto* opt_t = app.add_subcommand("opt-timeout", "minimal timeout for a reliability target");
  opt_t->add_option("--config", config_path)->required();
  opt_t->add_option("--reliability", reliability)->required();
  opt_t->add_option("--trials", trials_opt);

  auto* opt_c = app.add_subcommand("opt-config", "risk-constrained channel probability search");
  opt_c->add_option("--config", config_path)->required();
  opt_c->add_option("--ps-grid", ps_spec)->required();
  opt_c->add_option("--pl-grid", pl_spec)->required();
  opt_c->add_option("--risk-budget", risk_budget)->required();
  opt_c->add_option("--out", out_path);

  auto* imp_t = app.add_subcommand("import-trace", "validate and normalize a contact CSV");
  imp_t->add_option("--in", in_path)->required();
  imp_t->add_option("--out", out_path)->required();
  imp_t->add_option("--id-map", map_path);
  imp_t->add_option("--n-nodes", n_nodes_opt);

  auto* imp_s = app.add_subcommand("import-social", "validate and normalize a social edge CSV");
  imp_s->add_option("--in", in_path)->required();
  imp_s->add_option("--out", out_path)->required();
  imp_s->add_option("--id-map", map_path);
  imp_s->add_option("--n-nodes", n_nodes_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) std::cerr << "error kind=config msg=\"" << e.what() << "\"\n";
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_gen_trace(config_path, out_path);
    if (est->parsed()) return cmd_estimate_rate(trace_path, config_path);
    if (atk->parsed()) return cmd_attack(config_path, tg_opt, tg_grid_spec, out_path, per_trial_path);
    if (ana->parsed()) return cmd_analytic(config_path, model_name, horizon, step, reliability_opt, out_path);
    if (opt_t->parsed()) return cmd_opt_timeout(config_path, reliability, trials_opt);
    if (opt_c->parsed()) return cmd_opt_config(config_path, ps_spec, pl_spec, risk_budget, out_path);
    if (imp_t->parsed()) return cmd_import_trace(in_path, out_path, map_path, n_nodes_opt);
    if (imp_s->parsed()) return cmd_import_social(in_path, out_path, map_path, n_nodes_opt);
  } catch (const config_error& e) {
    std::cerr << "error kind=config msg=\"" << e.what() << "\"\n";
    return kExitConfig;
  } catch (const infeasible_error& e) {
    std::cerr << "error kind=infeasible msg=\"" << e.what() << "\"\n";
    return kExitInfeasible;
  } catch (const data_error& e) {
    std::cerr << "error kind=data msg=\"" << e.what() << "\"\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error kind=data msg=\"" << e.what() << "\"\n";
    return kExitData;
  }
  return kExitOk;
}
