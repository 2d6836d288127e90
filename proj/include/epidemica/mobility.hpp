#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "epidemica/contact_trace.hpp"
#include "epidemica/geometry.hpp"
#include "epidemica/rng.hpp"

namespace epidemica {

enum class MobilityModel { random_waypoint, random_direction };

struct MobilityConfig {
  std::int32_t n_nodes = 0;
  double box_length_km = 0.0;  // side of the wrap-around square
  double radius_km = 0.0;      // contact range
  double v_min_kmh = 0.0;
  double v_max_kmh = 0.0;
  MobilityModel model = MobilityModel::random_waypoint;
  double dt_h = 0.002;  // 7.2 s; keeps dt*v_max <= r/2 for walking-speed setups
  double duration_h = 0.0;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (n_nodes < 2) throw config_error("mobility: n_nodes must be >= 2");
    if (!(radius_km > 0.0) || !(radius_km < 0.5 * box_length_km))
      throw config_error("mobility: need 0 < radius < box_length/2");
    if (!(v_min_kmh > 0.0) || !(v_min_kmh <= v_max_kmh))
      throw config_error("mobility: need 0 < v_min <= v_max");
    if (!(dt_h > 0.0)) throw config_error("mobility: dt must be positive");
    if (!(duration_h > 0.0)) throw config_error("mobility: duration must be positive");
  }

  // Contacts can be stepped over entirely when a node moves more than r/2
  // per tick; generation still proceeds but flags the trace.
  bool step_resolves_contacts() const { return dt_h * v_max_kmh <= 0.5 * radius_km; }
};

namespace detail {

struct KinematicState {
  std::vector<Vec2> pos;
  // RWP: current waypoint; RD: unit heading. One of the two is used.
  std::vector<Vec2> aux;
  std::vector<double> speed_kmh;
  std::vector<double> leg_remaining_km;  // RD only
};

inline void init_kinematics(const MobilityConfig& cfg, Rng& rng, KinematicState& st) {
  const auto n = static_cast<std::size_t>(cfg.n_nodes);
  const double L = cfg.box_length_km;
  st.pos.resize(n);
  st.aux.resize(n);
  st.speed_kmh.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.pos[i] = {rng.uniform(0.0, L), rng.uniform(0.0, L)};
  if (cfg.model == MobilityModel::random_waypoint) {
    for (std::size_t i = 0; i < n; ++i) {
      st.aux[i] = {rng.uniform(0.0, L), rng.uniform(0.0, L)};
      st.speed_kmh[i] = rng.uniform(cfg.v_min_kmh, cfg.v_max_kmh);
    }
  } else {
    st.leg_remaining_km.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
      st.aux[i] = {std::cos(theta), std::sin(theta)};
      st.speed_kmh[i] = rng.uniform(cfg.v_min_kmh, cfg.v_max_kmh);
      st.leg_remaining_km[i] = rng.exponential(2.0 / cfg.box_length_km);  // mean L/2
    }
  }
}

// Advance every node by one tick. Waypoint legs travel inside the square
// (no wrapping); direction legs wrap around the torus.
inline void step_kinematics(const MobilityConfig& cfg, Rng& rng, KinematicState& st) {
  const auto n = static_cast<std::size_t>(cfg.n_nodes);
  const double L = cfg.box_length_km;
  if (cfg.model == MobilityModel::random_waypoint) {
    for (std::size_t i = 0; i < n; ++i) {
      const double step_km = st.speed_kmh[i] * cfg.dt_h;
      const double dx = st.aux[i].x - st.pos[i].x;
      const double dy = st.aux[i].y - st.pos[i].y;
      const double dist = std::hypot(dx, dy);
      if (dist <= step_km) {
        st.pos[i] = st.aux[i];
        st.aux[i] = {rng.uniform(0.0, L), rng.uniform(0.0, L)};
        st.speed_kmh[i] = rng.uniform(cfg.v_min_kmh, cfg.v_max_kmh);
      } else {
        st.pos[i].x += dx / dist * step_km;
        st.pos[i].y += dy / dist * step_km;
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double step_km = st.speed_kmh[i] * cfg.dt_h;
      st.pos[i].x = wrap_coordinate(st.pos[i].x + st.aux[i].x * step_km, L);
      st.pos[i].y = wrap_coordinate(st.pos[i].y + st.aux[i].y * step_km, L);
      st.leg_remaining_km[i] -= step_km;
      if (st.leg_remaining_km[i] <= 0.0) {
        const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        st.aux[i] = {std::cos(theta), std::sin(theta)};
        st.speed_kmh[i] = rng.uniform(cfg.v_min_kmh, cfg.v_max_kmh);
        st.leg_remaining_km[i] = rng.exponential(2.0 / cfg.box_length_km);
      }
    }
  }
}

}  // namespace detail

// Time-stepped contact detection on the torus. A contact opens at the first
// tick two nodes are within radius and closes at the first tick they are
// apart again (or at the trace end), so every detected contact spans at
// least one tick. Deterministic for a given config, including the seed.
inline ContactTrace generate_contact_trace(const MobilityConfig& cfg,
                                           std::vector<std::string>* warnings = nullptr) {
  cfg.validate();
  if (!cfg.step_resolves_contacts() && warnings != nullptr) {
    warnings->push_back("mobility fidelity: dt*v_max = " + format_double(cfg.dt_h * cfg.v_max_kmh) +
                        " km exceeds radius/2 = " + format_double(0.5 * cfg.radius_km) +
                        " km; short contacts may be stepped over");
  }

  Rng rng(cfg.rng_seed);
  detail::KinematicState st;
  detail::init_kinematics(cfg, rng, st);

  const auto n = static_cast<std::size_t>(cfg.n_nodes);
  const std::size_t n_pairs = n * (n - 1) / 2;
  // open_since[p] >= 0 marks an in-progress contact for pair index p.
  std::vector<double> open_since(n_pairs, -1.0);
  const double r2 = cfg.radius_km * cfg.radius_km;
  const double L = cfg.box_length_km;

  ContactTrace trace;
  trace.n_nodes = cfg.n_nodes;
  trace.duration_h = cfg.duration_h;
  trace.provenance = cfg.model == MobilityModel::random_waypoint ? TraceProvenance::synthetic_rwp
                                                                 : TraceProvenance::synthetic_rd;

  const auto steps = static_cast<std::size_t>(std::ceil(cfg.duration_h / cfg.dt_h));
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = std::min(static_cast<double>(s) * cfg.dt_h, cfg.duration_h);
    if (s > 0) detail::step_kinematics(cfg, rng, st);
    std::size_t p = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j, ++p) {
        const Vec2 d = toroidal_delta(st.pos[i], st.pos[j], L);
        const bool close = d.x * d.x + d.y * d.y <= r2;
        if (close && open_since[p] < 0.0) {
          open_since[p] = t;
        } else if (!close && open_since[p] >= 0.0) {
          trace.events.push_back({open_since[p], t, static_cast<std::int32_t>(i),
                                  static_cast<std::int32_t>(j)});
          open_since[p] = -1.0;
        }
      }
    }
  }
  // Close out contacts still in progress at the horizon.
  std::size_t p = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++p) {
      if (open_since[p] >= 0.0 && open_since[p] < cfg.duration_h) {
        trace.events.push_back({open_since[p], cfg.duration_h, static_cast<std::int32_t>(i),
                                static_cast<std::int32_t>(j)});
      }
    }
  }
  trace.sort_events();
  return trace;
}

struct MeetingRateEstimate {
  double rate_per_pair_h = 0.0;      // contact starts / (pairs * duration)
  double mean_inter_meeting_h = 0.0; // mean gap from contact end to next start, pooled; NaN if no gaps
  std::size_t contact_starts = 0;
};

inline MeetingRateEstimate estimate_pairwise_meeting_rate(const ContactTrace& trace) {
  if (trace.duration_h <= 0.0) throw data_error("meeting rate: zero-duration trace");
  if (trace.n_nodes < 2) throw data_error("meeting rate: need at least two nodes");

  MeetingRateEstimate est;
  est.contact_starts = trace.events.size();
  const double n_pairs = 0.5 * static_cast<double>(trace.n_nodes) *
                         static_cast<double>(trace.n_nodes - 1);
  est.rate_per_pair_h = static_cast<double>(est.contact_starts) / (n_pairs * trace.duration_h);

  // Inter-meeting gaps (end of one contact to start of the next of the same
  // pair) for exponential-fit diagnostics.
  std::vector<std::pair<std::int64_t, std::pair<double, double>>> by_pair;
  by_pair.reserve(trace.events.size());
  for (const ContactEvent& e : trace.events) {
    by_pair.push_back({static_cast<std::int64_t>(e.u) * trace.n_nodes + e.v,
                       {e.t_start_h, e.t_end_h}});
  }
  std::stable_sort(by_pair.begin(), by_pair.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return a.second.first < b.second.first;
                   });
  double gap_sum = 0.0;
  std::size_t gap_count = 0;
  for (std::size_t i = 1; i < by_pair.size(); ++i) {
    if (by_pair[i].first == by_pair[i - 1].first) {
      gap_sum += by_pair[i].second.first - by_pair[i - 1].second.second;
      ++gap_count;
    }
  }
  est.mean_inter_meeting_h = gap_count > 0 ? gap_sum / static_cast<double>(gap_count)
                                           : std::numeric_limits<double>::quiet_NaN();
  return est;
}

// Waypoint-model correction constant from the epidemic-routing literature;
// direction-model motion is density-uniform and needs none.
inline constexpr double kWaypointRateConstant = 1.3683;

// Mean relative speed of two independent nodes, averaged over the
// time-stationary speed distribution and a uniform relative heading.
// Slower legs last longer, so the time-stationary speed density on
// [v_min, v_max] is proportional to 1/v.
inline double mean_relative_speed(double v_min_kmh, double v_max_kmh) {
  if (!(v_min_kmh > 0.0) || !(v_min_kmh <= v_max_kmh))
    throw config_error("mean_relative_speed: need 0 < v_min <= v_max");

  const auto rel_speed_over_angle = [](double v1, double v2) {
    // (1/pi) * Integral_0^pi sqrt(v1^2 + v2^2 - 2 v1 v2 cos(theta)) dtheta,
    // composite Simpson.
    constexpr int kAngleIntervals = 256;
    const double h = std::numbers::pi / kAngleIntervals;
    double sum = 0.0;
    for (int k = 0; k <= kAngleIntervals; ++k) {
      const double theta = k * h;
      const double f = std::sqrt(v1 * v1 + v2 * v2 - 2.0 * v1 * v2 * std::cos(theta));
      const double w = (k == 0 || k == kAngleIntervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      sum += w * f;
    }
    return sum * h / 3.0 / std::numbers::pi;
  };

  if (v_max_kmh == v_min_kmh) return rel_speed_over_angle(v_min_kmh, v_max_kmh);

  // Two nested Simpson passes over the 1/v-weighted speed density.
  constexpr int kSpeedIntervals = 128;
  const double norm = std::log(v_max_kmh / v_min_kmh);
  const double hv = (v_max_kmh - v_min_kmh) / kSpeedIntervals;
  const auto weight = [&](int k) {
    return (k == 0 || k == kSpeedIntervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
  };
  double outer = 0.0;
  for (int a = 0; a <= kSpeedIntervals; ++a) {
    const double v1 = v_min_kmh + a * hv;
    double inner = 0.0;
    for (int b = 0; b <= kSpeedIntervals; ++b) {
      const double v2 = v_min_kmh + b * hv;
      inner += weight(b) * rel_speed_over_angle(v1, v2) / v2;
    }
    inner *= hv / 3.0;
    outer += weight(a) * inner / v1;
  }
  outer *= hv / 3.0;
  return outer / (norm * norm);
}

// Predicted pairwise meeting rate 2 * omega * r * E[V*] / L^2 (per pair per
// hour) for homogeneous-mixing mobility on the wrap-around square.
inline double analytic_meeting_rate(const MobilityConfig& cfg) {
  cfg.validate();
  const double omega =
      cfg.model == MobilityModel::random_waypoint ? kWaypointRateConstant : 1.0;
  const double ev = mean_relative_speed(cfg.v_min_kmh, cfg.v_max_kmh);
  return 2.0 * omega * cfg.radius_km * ev / (cfg.box_length_km * cfg.box_length_km);
}

}  // namespace epidemica
