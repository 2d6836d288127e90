#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epidemica/analytic.hpp"
#include "epidemica/engine.hpp"
#include "epidemica/io.hpp"
#include "epidemica/mobility.hpp"
#include "epidemica/traces.hpp"

namespace epidemica {

// A scenario document wires one contact source, the attack parameters and the
// analytic counterpart together. Field names carry units (_h, _km, _kmh) on
// purpose; mixing implicit units is how rate constants go wrong.
struct ScenarioConfig {
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 1;
  double horizon_h = 0.0;

  enum class SourceKind { mobility, trace, fully_mixed } source_kind = SourceKind::fully_mixed;
  MobilityConfig mobility;
  bool mobility_regenerate_per_trial = true;
  std::string trace_file;
  std::int32_t fully_mixed_nodes = 0;
  double fully_mixed_pairwise_rate_per_h = 0.0;

  std::string social_graph_file;
  double social_slot_h = 0.25;

  AttackConfig attack;
  std::optional<EpidemicParams> epidemic_override;

  std::string digest;  // canonical-form FNV digest, echoed into outputs
};

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                           const char* context) {
  auto it = j.find(key);
  if (it == j.end())
    throw config_error(std::string(context) + ": missing required field '" + key + "'");
  return *it;
}

inline double json_time_or_inf(const nlohmann::json& j) {
  if (j.is_string() && (j.get<std::string>() == "inf" || j.get<std::string>() == "infinity"))
    return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw config_error("expected a number or \"inf\"");
  return j.get<double>();
}

}  // namespace detail

inline ScenarioConfig parse_scenario_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }

  try {
    ScenarioConfig cfg;
    cfg.master_seed = j.value("master_seed", 0ull);
    cfg.trials = j.value("trials", 1ull);
    cfg.horizon_h = j.value("horizon_h", 0.0);

    const nlohmann::json& src = detail::require_field(j, "contact_source", "config");
    const std::string kind = detail::require_field(src, "kind", "contact_source").get<std::string>();
    int provided = static_cast<int>(src.contains("mobility")) +
                   static_cast<int>(src.contains("trace_file")) +
                   static_cast<int>(src.contains("fully_mixed"));
    if (provided != 1)
      throw config_error("contact_source: exactly one of mobility/trace_file/fully_mixed required");

    if (kind == "mobility") {
      const nlohmann::json& m = detail::require_field(src, "mobility", "contact_source");
      cfg.source_kind = ScenarioConfig::SourceKind::mobility;
      cfg.mobility.n_nodes = detail::require_field(m, "n_nodes", "mobility").get<std::int32_t>();
      cfg.mobility.box_length_km = detail::require_field(m, "box_length_km", "mobility").get<double>();
      cfg.mobility.radius_km = detail::require_field(m, "radius_km", "mobility").get<double>();
      cfg.mobility.v_min_kmh = detail::require_field(m, "v_min_kmh", "mobility").get<double>();
      cfg.mobility.v_max_kmh = detail::require_field(m, "v_max_kmh", "mobility").get<double>();
      const std::string model = detail::require_field(m, "model", "mobility").get<std::string>();
      if (model == "rwp") cfg.mobility.model = MobilityModel::random_waypoint;
      else if (model == "rd") cfg.mobility.model = MobilityModel::random_direction;
      else throw config_error("mobility: model must be 'rwp' or 'rd'");
      cfg.mobility.dt_h = m.value("dt_h", 0.002);
      cfg.mobility.duration_h = m.value("duration_h", cfg.horizon_h);
      cfg.mobility.rng_seed = m.value("rng_seed", cfg.master_seed);
      cfg.mobility_regenerate_per_trial = m.value("regenerate_per_trial", true);
      cfg.mobility.validate();
    } else if (kind == "trace") {
      cfg.source_kind = ScenarioConfig::SourceKind::trace;
      cfg.trace_file = detail::require_field(src, "trace_file", "contact_source").get<std::string>();
    } else if (kind == "fully_mixed") {
      const nlohmann::json& f = detail::require_field(src, "fully_mixed", "contact_source");
      cfg.source_kind = ScenarioConfig::SourceKind::fully_mixed;
      cfg.fully_mixed_nodes = detail::require_field(f, "n_nodes", "fully_mixed").get<std::int32_t>();
      if (f.contains("pairwise_rate_per_h") == f.contains("aggregate_rate_per_h"))
        throw config_error("fully_mixed: exactly one of pairwise_rate_per_h/aggregate_rate_per_h");
      cfg.fully_mixed_pairwise_rate_per_h =
          f.contains("pairwise_rate_per_h")
              ? f["pairwise_rate_per_h"].get<double>()
              : f["aggregate_rate_per_h"].get<double>() / cfg.fully_mixed_nodes;
    } else {
      throw config_error("contact_source: kind must be mobility|trace|fully_mixed");
    }

    if (j.contains("social")) {
      const nlohmann::json& s = j["social"];
      cfg.social_graph_file = detail::require_field(s, "graph_file", "social").get<std::string>();
      cfg.social_slot_h = s.value("social_slot_h", 0.25);
    }

    const nlohmann::json& a = detail::require_field(j, "attack", "config");
    if (a.contains("seed_ids") == a.contains("random_seed_count"))
      throw config_error("attack: exactly one of seed_ids/random_seed_count required");
    if (a.contains("seed_ids"))
      cfg.attack.seed_rule = SeedRule::fixed(a["seed_ids"].get<std::vector<std::int32_t>>());
    else
      cfg.attack.seed_rule = SeedRule::random(a["random_seed_count"].get<std::int32_t>());
    if (a.contains("target_id"))
      cfg.attack.target_rule = TargetRule::fixed(a["target_id"].get<std::int32_t>());
    if (a.contains("global_timeout_h"))
      cfg.attack.global_timeout_h = detail::json_time_or_inf(a["global_timeout_h"]);
    cfg.attack.p_proximity = a.value("p_proximity", 1.0);
    cfg.attack.p_social = a.value("p_social", 0.0);
    cfg.attack.social_slot_h = cfg.social_slot_h;
    if (a.contains("patch")) {
      const nlohmann::json& pj = a["patch"];
      PatchConfig patch;
      patch.activation_time_h = pj.value("activation_time_h", 0.0);
      patch.initial_patched = pj.value("initial_patched", std::vector<std::int32_t>{});
      patch.p_patch = pj.value("p_patch", 1.0);
      cfg.attack.patch = patch;
    }
    cfg.attack.validate();

    if (j.contains("epidemic")) {
      const nlohmann::json& e = j["epidemic"];
      EpidemicParams p;
      p.population = detail::require_field(e, "population", "epidemic").get<std::int32_t>();
      if (e.contains("pairwise_rate_per_h") == e.contains("aggregate_rate_per_h"))
        throw config_error("epidemic: exactly one of pairwise_rate_per_h/aggregate_rate_per_h");
      p.pairwise_rate_per_h = e.contains("pairwise_rate_per_h")
                                  ? e["pairwise_rate_per_h"].get<double>()
                                  : e["aggregate_rate_per_h"].get<double>() / p.population;
      p.recovery_rate_per_h = e.value("recovery_rate_per_h", 0.0);
      p.initial_infected = e.value("initial_infected", 1);
      p.validate();
      cfg.epidemic_override = p;
    }

    if (!(cfg.horizon_h > 0.0) && cfg.source_kind != ScenarioConfig::SourceKind::trace)
      throw config_error("config: horizon_h must be positive");

    // Canonical digest over the parsed document (keys are stored sorted).
    cfg.digest = hex64(fnv1a64(j.dump()));
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config error: ") + e.what());
  }
}

inline ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  return parse_scenario_json(read_file(path));
}

// Materialized scenario: stream source + node count + analytic counterpart.
struct Scenario {
  std::unique_ptr<ScenarioSource> source;
  AttackConfig attack;
  EpidemicParams epidemic;
  std::uint64_t master_seed = 0;
  std::uint64_t trials = 1;
  std::string digest;
  std::vector<std::string> warnings;
};

// Loads referenced files and builds the stream source. The analytic
// parameters come from the explicit epidemic block when present, otherwise
// they are derived from the contact source (formula rate for mobility,
// estimator for imported traces, the configured rate when fully mixed) with
// the seed count as the initial infected population.
inline Scenario build_scenario(const ScenarioConfig& cfg) {
  Scenario sc;
  sc.master_seed = cfg.master_seed;
  sc.trials = cfg.trials;
  sc.digest = cfg.digest;
  sc.attack = cfg.attack;

  SocialGraph social;
  const bool has_social = !cfg.social_graph_file.empty();

  DualPathConfig dual;
  dual.p_social = cfg.attack.p_social;
  dual.p_proximity = cfg.attack.p_proximity;
  dual.social_slot_h = cfg.social_slot_h;
  dual.horizon_h = cfg.horizon_h;

  std::int32_t n_nodes = 0;
  double derived_rate = 0.0;

  switch (cfg.source_kind) {
    case ScenarioConfig::SourceKind::mobility: {
      n_nodes = cfg.mobility.n_nodes;
      if (has_social) {
        auto imported = import_social_csv(read_file(cfg.social_graph_file), n_nodes);
        social = std::move(imported.value);
        for (auto& w : imported.warnings) sc.warnings.push_back(std::move(w));
      }
      if (!cfg.mobility.step_resolves_contacts())
        sc.warnings.push_back("mobility fidelity: dt*v_max exceeds radius/2");
      sc.source = std::make_unique<MobilitySource>(cfg.mobility, social, dual,
                                                   cfg.mobility_regenerate_per_trial);
      derived_rate = analytic_meeting_rate(cfg.mobility);
      break;
    }
    case ScenarioConfig::SourceKind::trace: {
      auto imported = import_contact_csv(read_file(cfg.trace_file));
      for (auto& w : imported.warnings) sc.warnings.push_back(std::move(w));
      ContactTrace trace = std::move(imported.value);
      n_nodes = trace.n_nodes;
      // The configured horizon is the observation window when it extends past
      // the last recorded contact.
      if (cfg.horizon_h > trace.duration_h) trace.duration_h = cfg.horizon_h;
      if (dual.horizon_h <= 0.0) dual.horizon_h = trace.duration_h;
      if (has_social) {
        auto social_imported = import_social_csv(read_file(cfg.social_graph_file), n_nodes);
        social = std::move(social_imported.value);
        for (auto& w : social_imported.warnings) sc.warnings.push_back(std::move(w));
      }
      derived_rate = estimate_pairwise_meeting_rate(trace).rate_per_pair_h;
      sc.source = std::make_unique<FixedStreamSource>(build_exposure_stream(trace, social, dual));
      break;
    }
    case ScenarioConfig::SourceKind::fully_mixed: {
      n_nodes = cfg.fully_mixed_nodes;
      if (has_social)
        throw config_error("fully_mixed scenarios take no social overlay; use a trace source");
      sc.source = std::make_unique<FullyMixedSource>(n_nodes, cfg.fully_mixed_pairwise_rate_per_h,
                                                     cfg.horizon_h);
      derived_rate = cfg.fully_mixed_pairwise_rate_per_h;
      break;
    }
  }

  if (cfg.epidemic_override) {
    sc.epidemic = *cfg.epidemic_override;
  } else {
    sc.epidemic.population = n_nodes;
    sc.epidemic.pairwise_rate_per_h = derived_rate;
    sc.epidemic.recovery_rate_per_h = 0.0;
    const std::size_t seed_count = cfg.attack.fixed_seed_count() > 0
                                       ? cfg.attack.fixed_seed_count()
                                       : static_cast<std::size_t>(cfg.attack.seed_rule.random_k);
    sc.epidemic.initial_infected = static_cast<std::int32_t>(seed_count);
    sc.epidemic.validate();
  }
  return sc;
}

// EPIDEMICA_THREADS caps worker parallelism for CLI-driven runs (0 or unset
// means automatic).
inline unsigned threads_from_environment() {
  const char* env = std::getenv("EPIDEMICA_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  std::int64_t v = 0;
  try {
    v = parse_int(env);
  } catch (const data_error&) {
    throw config_error("EPIDEMICA_THREADS must be a non-negative integer");
  }
  if (v < 0) throw config_error("EPIDEMICA_THREADS must be >= 0");
  return static_cast<unsigned>(v);
}

}  // namespace epidemica
