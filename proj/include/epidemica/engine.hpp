#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "epidemica/exposure.hpp"
#include "epidemica/io.hpp"
#include "epidemica/mobility.hpp"
#include "epidemica/rng.hpp"
#include "epidemica/traces.hpp"

namespace epidemica {

// ---------------------------------------------------------------------------
// Attack configuration
// ---------------------------------------------------------------------------

struct SeedRule {
  // Fixed ids when non-empty; otherwise draw `random_k` distinct nodes per trial.
  std::vector<std::int32_t> fixed_ids;
  std::int32_t random_k = 0;

  static SeedRule fixed(std::vector<std::int32_t> ids) { return {std::move(ids), 0}; }
  static SeedRule random(std::int32_t k) { return {{}, k}; }
};

struct TargetRule {
  // Fixed id when set; otherwise a uniformly random node distinct from the seeds.
  std::optional<std::int32_t> fixed_id;

  static TargetRule fixed(std::int32_t id) { return {id}; }
  static TargetRule random_distinct() { return {}; }
};

struct PatchConfig {
  double activation_time_h = 0.0;
  std::vector<std::int32_t> initial_patched;
  double p_patch = 1.0;  // per-opportunity forwarding probability

  void validate() const {
    if (activation_time_h < 0.0) throw config_error("patch: activation time must be >= 0");
    if (p_patch < 0.0 || p_patch > 1.0) throw config_error("patch: p_patch must lie in [0,1]");
  }
};

struct AttackConfig {
  SeedRule seed_rule = SeedRule::random(1);
  TargetRule target_rule = TargetRule::random_distinct();
  double global_timeout_h = std::numeric_limits<double>::infinity();
  double p_proximity = 1.0;
  double p_social = 0.0;
  double social_slot_h = 0.25;
  std::optional<PatchConfig> patch;

  void validate() const {
    if (p_proximity < 0.0 || p_proximity > 1.0 || p_social < 0.0 || p_social > 1.0)
      throw config_error("attack: channel probabilities must lie in [0,1]");
    if (global_timeout_h < 0.0) throw config_error("attack: global timeout must be >= 0");
    if (!(social_slot_h > 0.0)) throw config_error("attack: social slot must be positive");
    if (fixed_seed_count() == 0 && seed_rule.random_k <= 0)
      throw config_error("attack: need at least one seed");
    if (patch) patch->validate();
  }

  std::size_t fixed_seed_count() const { return seed_rule.fixed_ids.size(); }

  double channel_probability(Channel c) const {
    return c == Channel::proximity ? p_proximity : p_social;
  }
};

// ---------------------------------------------------------------------------
// Trial outcome
// ---------------------------------------------------------------------------

// Per-node event times; NaN marks "never". Infections past the trial's stop
// time are included up to min(T_G, horizon) so audits can reconstruct the
// full trajectory.
struct InfectionLog {
  std::vector<double> infected_at;
  std::vector<double> removed_at;
};

struct TrialOutcome {
  bool success = false;
  std::optional<double> t_hit_h;
  double stop_time_h = 0.0;            // min(t_hit, T_G, horizon)
  double risk_time_integral_h = 0.0;   // (1/N) * integral of #I over [0, stop_time]
  double risk_to_timeout_h = 0.0;      // same integral over [0, min(T_G, horizon)], no early stop
  std::int32_t ever_infected = 0;      // nodes infected by stop_time
  std::vector<std::int32_t> seeds;
  std::int32_t target = -1;
  std::optional<InfectionLog> infection_log;
};

// ---------------------------------------------------------------------------
// Wilson score interval
// ---------------------------------------------------------------------------

inline std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                                 double confidence = 0.95) {
  if (trials == 0) throw config_error("wilson_interval: trials must be >= 1");
  if (successes > trials) throw config_error("wilson_interval: successes exceed trials");
  // Normal quantile for the two-sided confidence level; 0.95 is the everyday
  // case so it is pinned exactly, everything else goes through an
  // Acklam-style inverse-normal approximation (good to ~1e-9).
  double z;
  if (std::abs(confidence - 0.95) < 1e-12) {
    z = 1.959963984540054;
  } else {
    if (!(confidence > 0.0 && confidence < 1.0))
      throw config_error("wilson_interval: confidence must lie in (0,1)");
    const double p = 0.5 + confidence / 2.0;
    // Peter Acklam's rational approximation to the normal quantile.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00, 2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    if (p > 0.97575) {
      const double q = std::sqrt(-2.0 * std::log(1.0 - p));
      z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
          ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
      const double q = p - 0.5, r = q * q;
      z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
          (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
  }
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // The boundary cases are exactly 0 and 1; keep them free of rounding noise.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Single trial
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::int32_t> resolve_seeds(const AttackConfig& cfg, std::int32_t n_nodes,
                                               std::uint64_t master_seed, std::uint64_t trial_id) {
  if (!cfg.seed_rule.fixed_ids.empty()) {
    for (std::int32_t id : cfg.seed_rule.fixed_ids) {
      if (id < 0 || id >= n_nodes) throw config_error("attack: seed id out of range");
    }
    return cfg.seed_rule.fixed_ids;
  }
  const std::int32_t k = cfg.seed_rule.random_k;
  if (k >= n_nodes) throw config_error("attack: cannot seed every node");
  Rng rng(derive_seed(master_seed, trial_id, RngDomain::seed_selection));
  std::vector<std::int32_t> seeds;
  seeds.reserve(static_cast<std::size_t>(k));
  while (static_cast<std::int32_t>(seeds.size()) < k) {
    const auto cand = static_cast<std::int32_t>(rng.uniform_index(static_cast<std::uint64_t>(n_nodes)));
    if (std::find(seeds.begin(), seeds.end(), cand) == seeds.end()) seeds.push_back(cand);
  }
  return seeds;
}

inline std::int32_t resolve_target(const AttackConfig& cfg, const std::vector<std::int32_t>& seeds,
                                   std::int32_t n_nodes, std::uint64_t master_seed,
                                   std::uint64_t trial_id) {
  if (cfg.target_rule.fixed_id) {
    const std::int32_t id = *cfg.target_rule.fixed_id;
    if (id < 0 || id >= n_nodes) throw config_error("attack: target id out of range");
    return id;
  }
  if (static_cast<std::int32_t>(seeds.size()) >= n_nodes)
    throw config_error("attack: no non-seed node left to target");
  Rng rng(derive_seed(master_seed, trial_id, RngDomain::target_selection));
  while (true) {
    const auto cand = static_cast<std::int32_t>(rng.uniform_index(static_cast<std::uint64_t>(n_nodes)));
    if (std::find(seeds.begin(), seeds.end(), cand) == seeds.end()) return cand;
  }
}

}  // namespace detail

struct TrialOptions {
  bool keep_infection_log = false;
  double horizon_h = std::numeric_limits<double>::infinity();
};

// Event-driven propagation over one exposure stream.
//
// An event (t, src, dst, channel) infects dst iff src is infected, dst is
// susceptible, t <= min(T_G, horizon) and the counter-based draw for its key
// clears the channel probability. Because the draw depends only on
// (master_seed, trial_id, event_key), trajectories under different timeouts,
// probabilities or channel mixes of the same scenario are exactly coupled.
// Propagation continues past the target hit (up to min(T_G, horizon)) so the
// no-early-stop risk integral can be reported next to the stopped one; the
// outcome fields are unaffected by the continuation.
inline TrialOutcome run_trial(const ExposureStream& stream, const AttackConfig& cfg,
                              std::int32_t n_nodes, std::uint64_t trial_id,
                              std::uint64_t master_seed, const TrialOptions& opts = {}) {
  cfg.validate();
  if (n_nodes < stream.n_nodes) throw config_error("run_trial: n_nodes smaller than stream");
  stream.validate();

  const std::vector<std::int32_t> seeds = detail::resolve_seeds(cfg, n_nodes, master_seed, trial_id);
  const std::int32_t target = detail::resolve_target(cfg, seeds, n_nodes, master_seed, trial_id);

  constexpr double kNever = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> infected_at(static_cast<std::size_t>(n_nodes), kNever);
  std::vector<double> removed_at(static_cast<std::size_t>(n_nodes), kNever);
  std::vector<bool> patch_carrier(static_cast<std::size_t>(n_nodes), false);

  const double end_time = std::min(cfg.global_timeout_h, opts.horizon_h);

  TrialOutcome out;
  out.seeds = seeds;
  out.target = target;

  for (std::int32_t s : seeds) infected_at[static_cast<std::size_t>(s)] = 0.0;

  std::optional<double> t_hit;
  if (std::find(seeds.begin(), seeds.end(), target) != seeds.end()) t_hit = 0.0;

  bool patch_active = false;
  const auto activate_patch = [&](double now) {
    patch_active = true;
    for (std::int32_t id : cfg.patch->initial_patched) {
      if (id < 0 || id >= n_nodes) throw config_error("patch: node id out of range");
      auto idx = static_cast<std::size_t>(id);
      patch_carrier[idx] = true;
      if (std::isnan(removed_at[idx])) removed_at[idx] = now;
    }
  };
  if (cfg.patch && cfg.patch->activation_time_h <= 0.0) activate_patch(0.0);

  for (const ExposureEvent& e : stream.events) {
    if (e.t_h > end_time) break;
    if (cfg.patch && !patch_active && e.t_h >= cfg.patch->activation_time_h)
      activate_patch(cfg.patch->activation_time_h);

    const auto src = static_cast<std::size_t>(e.src);
    const auto dst = static_cast<std::size_t>(e.dst);

    if (patch_active && patch_carrier[src] && !patch_carrier[dst]) {
      if (counter_uniform01(master_seed, trial_id, e.event_key, RngDomain::patch_draw) <
          cfg.patch->p_patch) {
        patch_carrier[dst] = true;
        if (std::isnan(removed_at[dst])) removed_at[dst] = e.t_h;
      }
    }

    const bool src_infectious = !std::isnan(infected_at[src]) && std::isnan(removed_at[src]);
    const bool dst_susceptible = std::isnan(infected_at[dst]) && std::isnan(removed_at[dst]);
    if (src_infectious && dst_susceptible &&
        counter_uniform01(master_seed, trial_id, e.event_key, RngDomain::infection_draw) <
            cfg.channel_probability(e.channel)) {
      infected_at[dst] = e.t_h;
      if (e.dst == target && !t_hit) t_hit = e.t_h;
    }
  }
  // Late patch activation with no event at or after the activation instant
  // still removes the initial carriers before the books close.
  if (cfg.patch && !patch_active && cfg.patch->activation_time_h <= end_time)
    activate_patch(cfg.patch->activation_time_h);

  out.t_hit_h = t_hit;
  out.success = t_hit.has_value() && *t_hit <= cfg.global_timeout_h;
  // With neither timeout nor horizon the accrual window is bounded by the
  // stream itself.
  const double stream_end =
      stream.horizon_h > 0.0 ? stream.horizon_h
                             : (stream.events.empty() ? 0.0 : stream.events.back().t_h);
  const double timeout_end = std::isfinite(end_time) ? end_time : stream_end;
  out.stop_time_h = std::min(t_hit.value_or(std::numeric_limits<double>::infinity()), timeout_end);

  const auto n = static_cast<std::size_t>(n_nodes);
  double risk_stop = 0.0, risk_timeout = 0.0;
  std::int32_t ever = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(infected_at[i])) continue;
    const double rem = std::isnan(removed_at[i]) ? std::numeric_limits<double>::infinity()
                                                 : removed_at[i];
    if (infected_at[i] <= out.stop_time_h) {
      ++ever;
      risk_stop += std::max(0.0, std::min(rem, out.stop_time_h) - infected_at[i]);
    }
    risk_timeout += std::max(0.0, std::min(rem, timeout_end) - infected_at[i]);
  }
  out.ever_infected = ever;
  out.risk_time_integral_h = risk_stop / static_cast<double>(n_nodes);
  out.risk_to_timeout_h = risk_timeout / static_cast<double>(n_nodes);

  if (opts.keep_infection_log) {
    // Timeout-driven self-deletion: whatever is still infected is removed at
    // min(T_G, horizon) in the log.
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isnan(infected_at[i]) && std::isnan(removed_at[i]) && std::isfinite(timeout_end))
        removed_at[i] = timeout_end;
    }
    out.infection_log = InfectionLog{std::move(infected_at), std::move(removed_at)};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario sources
// ---------------------------------------------------------------------------

// A scenario hands the engine one exposure stream per trial. Implementations
// must be safe to call from several threads at once (scratch provides
// per-worker storage).
class ScenarioSource {
 public:
  virtual ~ScenarioSource() = default;
  virtual std::int32_t n_nodes() const = 0;
  virtual double horizon_h() const = 0;
  virtual const ExposureStream& stream_for_trial(std::uint64_t master_seed, std::uint64_t trial_id,
                                                 ExposureStream& scratch) const = 0;
};

class FixedStreamSource final : public ScenarioSource {
 public:
  explicit FixedStreamSource(ExposureStream stream) : stream_(std::move(stream)) {
    stream_.validate();
  }
  std::int32_t n_nodes() const override { return stream_.n_nodes; }
  double horizon_h() const override { return stream_.horizon_h; }
  const ExposureStream& stream_for_trial(std::uint64_t, std::uint64_t,
                                         ExposureStream&) const override {
    return stream_;
  }

 private:
  ExposureStream stream_;
};

// Homogeneous-mixing contact process: every unordered pair meets as an
// independent Poisson process with the given pairwise rate; each meeting
// yields one proximity opportunity per direction. Regenerated per trial from
// (master_seed, trial_id).
class FullyMixedSource final : public ScenarioSource {
 public:
  FullyMixedSource(std::int32_t n_nodes, double pairwise_rate_per_h, double horizon_h)
      : n_(n_nodes), rate_(pairwise_rate_per_h), horizon_(horizon_h) {
    if (n_ < 2) throw config_error("fully mixed: need at least two nodes");
    if (!(rate_ >= 0.0)) throw config_error("fully mixed: rate must be >= 0");
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
      throw config_error("fully mixed: horizon must be positive and finite");
  }

  static FullyMixedSource from_aggregate_rate(std::int32_t n_nodes, double aggregate_rate_per_h,
                                              double horizon_h) {
    return FullyMixedSource(n_nodes, aggregate_rate_per_h / n_nodes, horizon_h);
  }

  std::int32_t n_nodes() const override { return n_; }
  double horizon_h() const override { return horizon_; }
  double pairwise_rate_per_h() const { return rate_; }

  const ExposureStream& stream_for_trial(std::uint64_t master_seed, std::uint64_t trial_id,
                                         ExposureStream& scratch) const override {
    scratch.n_nodes = n_;
    scratch.horizon_h = horizon_;
    scratch.events.clear();
    const auto n_pairs = static_cast<std::uint64_t>(n_) * (static_cast<std::uint64_t>(n_) - 1) / 2;
    const double total_rate = rate_ * static_cast<double>(n_pairs);
    if (total_rate <= 0.0) return scratch;
    Rng rng(derive_seed(master_seed, trial_id, RngDomain::stream_generation));
    std::uint64_t key = 0;
    // Superposed process: exponential waits at the total rate, each event
    // assigned to a uniformly random pair.
    for (double t = rng.exponential(total_rate); t <= horizon_;
         t += rng.exponential(total_rate)) {
      const std::uint64_t k = rng.uniform_index(n_pairs);
      const auto [u, v] = pair_from_index(k);
      scratch.events.push_back({t, u, v, Channel::proximity, key++});
      scratch.events.push_back({t, v, u, Channel::proximity, key++});
    }
    return scratch;
  }

 private:
  std::pair<std::int32_t, std::int32_t> pair_from_index(std::uint64_t k) const {
    // Row-major walk of the strict upper triangle.
    std::uint64_t row = 0;
    std::uint64_t row_len = static_cast<std::uint64_t>(n_) - 1;
    while (k >= row_len) {
      k -= row_len;
      --row_len;
      ++row;
    }
    return {static_cast<std::int32_t>(row), static_cast<std::int32_t>(row + 1 + k)};
  }

  std::int32_t n_;
  double rate_;
  double horizon_;
};

// Mobility-driven scenario, optionally with a social overlay. When
// regenerate_per_trial is set, each trial runs on a fresh trace whose seed
// derives from (master_seed, trial_id); otherwise the stream is built once
// from the config's own seed.
class MobilitySource final : public ScenarioSource {
 public:
  MobilitySource(MobilityConfig mobility, SocialGraph social, DualPathConfig dual,
                 bool regenerate_per_trial)
      : mobility_(mobility),
        social_(std::move(social)),
        dual_(dual),
        regenerate_(regenerate_per_trial) {
    mobility_.validate();
    dual_.validate();
    if (!regenerate_) {
      ContactTrace trace = generate_contact_trace(mobility_);
      fixed_ = build_exposure_stream(trace, social_, dual_);
    }
  }

  std::int32_t n_nodes() const override { return mobility_.n_nodes; }
  double horizon_h() const override { return dual_.horizon_h; }

  const ExposureStream& stream_for_trial(std::uint64_t master_seed, std::uint64_t trial_id,
                                         ExposureStream& scratch) const override {
    if (!regenerate_) return fixed_;
    MobilityConfig cfg = mobility_;
    cfg.rng_seed = derive_seed(master_seed, trial_id, RngDomain::stream_generation);
    ContactTrace trace = generate_contact_trace(cfg);
    scratch = build_exposure_stream(trace, social_, dual_);
    return scratch;
  }

 private:
  MobilityConfig mobility_;
  SocialGraph social_;
  DualPathConfig dual_;
  bool regenerate_;
  ExposureStream fixed_;
};

// ---------------------------------------------------------------------------
// Monte Carlo driver
// ---------------------------------------------------------------------------

struct MonteCarloSummary {
  std::uint64_t trials = 0;
  double success_rate = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double mean_risk = 0.0;             // stopped at min(t_hit, T_G, horizon)
  double mean_risk_to_timeout = 0.0;  // no early stop at the hit
  double mean_ever_infected_fraction = 0.0;
  std::vector<TrialOutcome> per_trial;  // populated on request
};

struct MonteCarloOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  bool keep_per_trial = false;
  bool keep_infection_logs = false;
};

inline unsigned resolve_thread_count(unsigned requested, std::uint64_t trials) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(trials, 1)));
}

// Runs trials 0..trials-1 and aggregates exactly over the recorded outcomes.
// Workers fill disjoint slots of one preallocated vector and the reduction
// walks it in trial order, so the summary does not depend on the thread count.
inline MonteCarloSummary run_monte_carlo(const ScenarioSource& scenario, const AttackConfig& cfg,
                                         std::uint64_t trials, std::uint64_t master_seed,
                                         const MonteCarloOptions& opts = {}) {
  if (trials < 1) throw config_error("run_monte_carlo: trials must be >= 1");
  cfg.validate();

  std::vector<TrialOutcome> outcomes(trials);
  const unsigned n_threads = resolve_thread_count(opts.threads, trials);

  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  const auto worker = [&]() {
    ExposureStream scratch;
    TrialOptions topts;
    topts.keep_infection_log = opts.keep_infection_logs;
    topts.horizon_h = scenario.horizon_h();
    while (true) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= trials) break;
      try {
        const ExposureStream& stream = scenario.stream_for_trial(master_seed, t, scratch);
        outcomes[t] = run_trial(stream, cfg, scenario.n_nodes(), t, master_seed, topts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) {
          try {
            std::throw_with_nested(data_error("trial " + std::to_string(t) + " failed"));
          } catch (...) {
            first_error = std::current_exception();
          }
        }
        next.store(trials);
        break;
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  MonteCarloSummary summary;
  summary.trials = trials;
  std::uint64_t successes = 0;
  double risk_sum = 0.0, risk_to_sum = 0.0, ever_sum = 0.0;
  for (const TrialOutcome& o : outcomes) {
    successes += o.success ? 1 : 0;
    risk_sum += o.risk_time_integral_h;
    risk_to_sum += o.risk_to_timeout_h;
    ever_sum += static_cast<double>(o.ever_infected) / scenario.n_nodes();
  }
  const auto n = static_cast<double>(trials);
  summary.success_rate = static_cast<double>(successes) / n;
  std::tie(summary.wilson_lo, summary.wilson_hi) = wilson_interval(successes, trials);
  summary.mean_risk = risk_sum / n;
  summary.mean_risk_to_timeout = risk_to_sum / n;
  summary.mean_ever_infected_fraction = ever_sum / n;
  if (opts.keep_per_trial) summary.per_trial = std::move(outcomes);
  return summary;
}

inline std::string to_json(const MonteCarloSummary& s, const std::string& config_digest = {}) {
  std::string out = "{\n";
  if (!config_digest.empty()) out += "  \"config_digest\": \"" + config_digest + "\",\n";
  out += "  \"trials\": " + std::to_string(s.trials) + ",\n";
  out += "  \"success_rate\": " + format_double(s.success_rate) + ",\n";
  out += "  \"wilson_lo\": " + format_double(s.wilson_lo) + ",\n";
  out += "  \"wilson_hi\": " + format_double(s.wilson_hi) + ",\n";
  out += "  \"mean_risk\": " + format_double(s.mean_risk) + ",\n";
  out += "  \"mean_risk_to_timeout\": " + format_double(s.mean_risk_to_timeout) + ",\n";
  out += "  \"mean_ever_infected_fraction\": " + format_double(s.mean_ever_infected_fraction) + "\n";
  out += "}\n";
  return out;
}

inline constexpr const char* kPerTrialCsvHeader = "trial_id,success,t_hit,risk,ever_infected";

inline std::string per_trial_csv(const MonteCarloSummary& s) {
  std::string out = kPerTrialCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < s.per_trial.size(); ++i) {
    const TrialOutcome& o = s.per_trial[i];
    out += std::to_string(i);
    out += ',';
    out += o.success ? '1' : '0';
    out += ',';
    out += o.t_hit_h ? format_double(*o.t_hit_h) : std::string("");
    out += ',';
    out += format_double(o.risk_time_integral_h);
    out += ',';
    out += std::to_string(o.ever_infected);
    out += '\n';
  }
  return out;
}

}  // namespace epidemica
