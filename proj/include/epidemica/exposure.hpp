#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "epidemica/io.hpp"

namespace epidemica {

enum class Channel : std::uint8_t { proximity = 0, social = 1 };

inline const char* to_string(Channel c) { return c == Channel::proximity ? "proximity" : "social"; }

// A directed transmission opportunity. event_key identifies the opportunity
// stably across trials and across parameter variations of the same scenario,
// which is what the coupled per-event draws key on.
struct ExposureEvent {
  double t_h = 0.0;
  std::int32_t src = 0;
  std::int32_t dst = 0;
  Channel channel = Channel::proximity;
  std::uint64_t event_key = 0;

  friend bool operator==(const ExposureEvent&, const ExposureEvent&) = default;
};

struct ExposureStream {
  std::int32_t n_nodes = 0;
  double horizon_h = 0.0;
  std::vector<ExposureEvent> events;  // sorted by (t_h, event_key)

  void sort_events() {
    std::sort(events.begin(), events.end(), [](const ExposureEvent& a, const ExposureEvent& b) {
      if (a.t_h != b.t_h) return a.t_h < b.t_h;
      return a.event_key < b.event_key;
    });
  }

  void validate() const {
    double prev = -1.0;
    for (const ExposureEvent& e : events) {
      if (e.src < 0 || e.dst < 0 || e.src >= n_nodes || e.dst >= n_nodes)
        throw data_error("exposure stream: node id out of range");
      if (e.src == e.dst) throw data_error("exposure stream: src == dst");
      if (e.t_h < prev) throw data_error("exposure stream: events not sorted by time");
      prev = e.t_h;
    }
  }
};

// Stable key layout: [63] channel | [62:24] source index | [23:1] repeat/slot | [0] direction.
// Proximity keys depend only on the contact trace and social keys only on the
// social graph, so restricting or extending the channel set never renames a
// surviving event.
inline std::uint64_t make_event_key(Channel channel, std::uint64_t source_index,
                                    std::uint64_t repeat, std::uint64_t direction) {
  if (source_index >= (1ull << 39) || repeat >= (1ull << 23))
    throw data_error("exposure stream: event key space exhausted");
  return (static_cast<std::uint64_t>(channel) << 63) | (source_index << 24) | (repeat << 1) |
         direction;
}

inline constexpr const char* kExposureCsvHeader = "t,src,dst,channel,event_key";

inline std::string to_csv(const ExposureStream& stream) {
  std::string out = kExposureCsvHeader;
  out += '\n';
  for (const ExposureEvent& e : stream.events) {
    out += format_double(e.t_h);
    out += ',';
    out += std::to_string(e.src);
    out += ',';
    out += std::to_string(e.dst);
    out += ',';
    out += to_string(e.channel);
    out += ',';
    out += std::to_string(e.event_key);
    out += '\n';
  }
  return out;
}

}  // namespace epidemica
