#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "epidemica/io.hpp"

namespace epidemica {

// One maximal interval during which a pair is within contact range.
// Stored with u < v; events of a fixed pair are disjoint and time-ordered.
struct ContactEvent {
  double t_start_h = 0.0;
  double t_end_h = 0.0;
  std::int32_t u = 0;
  std::int32_t v = 0;

  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

enum class TraceProvenance { synthetic_rwp, synthetic_rd, imported };

inline const char* to_string(TraceProvenance p) {
  switch (p) {
    case TraceProvenance::synthetic_rwp: return "synthetic-RWP";
    case TraceProvenance::synthetic_rd: return "synthetic-RD";
    default: return "imported";
  }
}

struct ContactTrace {
  std::vector<ContactEvent> events;  // globally sorted by t_start_h
  std::int32_t n_nodes = 0;
  double duration_h = 0.0;
  TraceProvenance provenance = TraceProvenance::imported;

  void sort_events() {
    std::stable_sort(events.begin(), events.end(), [](const ContactEvent& a, const ContactEvent& b) {
      if (a.t_start_h != b.t_start_h) return a.t_start_h < b.t_start_h;
      if (a.u != b.u) return a.u < b.u;
      return a.v < b.v;
    });
  }

  // Throws data_error on any structural violation.
  void validate() const {
    if (n_nodes < 2) throw data_error("contact trace: n_nodes must be >= 2");
    if (duration_h <= 0.0) throw data_error("contact trace: duration must be positive");
    double prev_start = -1.0;
    for (const ContactEvent& e : events) {
      if (e.u < 0 || e.v < 0 || e.u >= n_nodes || e.v >= n_nodes)
        throw data_error("contact trace: node id out of range");
      if (e.u >= e.v) throw data_error("contact trace: events must have u < v");
      if (!(e.t_start_h < e.t_end_h)) throw data_error("contact trace: t_start must precede t_end");
      if (e.t_start_h < 0.0 || e.t_end_h > duration_h)
        throw data_error("contact trace: event outside [0, duration]");
      if (e.t_start_h < prev_start) throw data_error("contact trace: events not sorted by t_start");
      prev_start = e.t_start_h;
    }
  }
};

inline constexpr const char* kContactCsvHeader = "t_start,t_end,u,v";

inline std::string to_csv(const ContactTrace& trace) {
  std::string out;
  out.reserve(32 * trace.events.size() + 32);
  out += kContactCsvHeader;
  out += '\n';
  for (const ContactEvent& e : trace.events) {
    out += format_double(e.t_start_h);
    out += ',';
    out += format_double(e.t_end_h);
    out += ',';
    out += std::to_string(e.u);
    out += ',';
    out += std::to_string(e.v);
    out += '\n';
  }
  return out;
}

}  // namespace epidemica
