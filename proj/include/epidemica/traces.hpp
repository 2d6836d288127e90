#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epidemica/contact_trace.hpp"
#include "epidemica/exposure.hpp"
#include "epidemica/io.hpp"
#include "epidemica/social_graph.hpp"

namespace epidemica {

struct DualPathConfig {
  double p_social = 0.05;
  double p_proximity = 0.05;
  double social_slot_h = 0.25;
  double horizon_h = 0.0;

  void validate() const {
    if (p_social < 0.0 || p_social > 1.0 || p_proximity < 0.0 || p_proximity > 1.0)
      throw config_error("dual path: probabilities must lie in [0,1]");
    if (!(social_slot_h > 0.0)) throw config_error("dual path: social slot must be positive");
    if (!(horizon_h > 0.0)) throw config_error("dual path: horizon must be positive");
  }
};

// index = new dense id, value = original id.
using IdMapping = std::vector<std::int64_t>;

template <typename T>
struct ImportResult {
  T value;
  IdMapping id_mapping;
  std::vector<std::string> warnings;
};

namespace detail {

struct CsvDoc {
  std::vector<std::string_view> header;
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;  // (line number, fields)
};

// Splits CSV text, skipping '#' comment lines and blank lines. Line numbers
// are 1-based positions in the original text for error reporting.
inline CsvDoc parse_csv(std::string_view text, std::string_view expected_header) {
  CsvDoc doc;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!text.empty()) {
    ++line_no;
    std::size_t nl = text.find('\n');
    std::string_view line = nl == std::string_view::npos ? text : text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      doc.header = split_csv_line(line);
      std::vector<std::string_view> want = split_csv_line(expected_header);
      if (doc.header != want)
        throw data_error("line " + std::to_string(line_no) + ": expected header '" +
                         std::string(expected_header) + "'");
      have_header = true;
      continue;
    }
    doc.rows.push_back({line_no, split_csv_line(line)});
  }
  if (!have_header) throw data_error("missing CSV header '" + std::string(expected_header) + "'");
  return doc;
}

inline void append_error(std::vector<std::string>& errors, std::size_t line_no,
                         const std::string& what) {
  errors.push_back("line " + std::to_string(line_no) + ": " + what);
}

[[noreturn]] inline void raise_row_errors(const std::vector<std::string>& errors) {
  std::string msg = "malformed rows (" + std::to_string(errors.size()) + "):";
  const std::size_t shown = std::min<std::size_t>(errors.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + errors[i];
  if (errors.size() > shown) msg += "\n  ...";
  throw data_error(msg);
}

// Dense remapping in increasing original-id order; identity when an explicit
// node count is supplied (ids are then validated against it instead).
inline IdMapping remap_ids(std::vector<std::int64_t>& ids, std::optional<std::int32_t> n_override) {
  if (n_override) {
    for (std::int64_t id : ids) {
      if (id < 0 || id >= *n_override)
        throw data_error("node id " + std::to_string(id) + " outside forced node count " +
                         std::to_string(*n_override));
    }
    IdMapping mapping(static_cast<std::size_t>(*n_override));
    for (std::size_t i = 0; i < mapping.size(); ++i) mapping[i] = static_cast<std::int64_t>(i);
    return mapping;
  }
  IdMapping mapping(ids.begin(), ids.end());
  std::sort(mapping.begin(), mapping.end());
  mapping.erase(std::unique(mapping.begin(), mapping.end()), mapping.end());
  std::map<std::int64_t, std::int64_t> lookup;
  for (std::size_t i = 0; i < mapping.size(); ++i) lookup[mapping[i]] = static_cast<std::int64_t>(i);
  for (std::int64_t& id : ids) id = lookup[id];
  return mapping;
}

}  // namespace detail

// Reads the `t_start,t_end,u,v` schema. Malformed rows are reported with
// their line numbers; overlapping intervals of a pair are merged with a
// warning. Node ids are remapped to a dense 0..n-1 range unless an explicit
// count pins them.
inline ImportResult<ContactTrace> import_contact_csv(std::string_view csv_text,
                                                     std::optional<std::int32_t> n_nodes_override = {},
                                                     std::optional<double> duration_override = {}) {
  detail::CsvDoc doc = detail::parse_csv(csv_text, kContactCsvHeader);

  struct Row {
    double t0, t1;
    std::int64_t u, v;
  };
  std::vector<Row> rows;
  std::vector<std::string> errors;
  rows.reserve(doc.rows.size());
  for (const auto& [line_no, fields] : doc.rows) {
    if (fields.size() != 4) {
      detail::append_error(errors, line_no, "expected 4 fields, got " + std::to_string(fields.size()));
      continue;
    }
    try {
      Row r{parse_double(fields[0]), parse_double(fields[1]), parse_int(fields[2]),
            parse_int(fields[3])};
      if (!std::isfinite(r.t0) || !std::isfinite(r.t1)) throw data_error("non-finite time");
      if (r.t0 < 0.0) throw data_error("negative start time");
      if (!(r.t0 < r.t1)) throw data_error("t_start must precede t_end");
      if (r.u < 0 || r.v < 0) throw data_error("negative node id");
      if (r.u == r.v) throw data_error("self-contact");
      if (r.u > r.v) std::swap(r.u, r.v);
      rows.push_back(r);
    } catch (const std::exception& e) {
      detail::append_error(errors, line_no, e.what());
    }
  }
  if (!errors.empty()) detail::raise_row_errors(errors);

  ImportResult<ContactTrace> result;

  std::vector<std::int64_t> ids;
  ids.reserve(rows.size() * 2);
  for (const Row& r : rows) {
    ids.push_back(r.u);
    ids.push_back(r.v);
  }
  result.id_mapping = detail::remap_ids(ids, n_nodes_override);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].u = ids[2 * i];
    rows[i].v = ids[2 * i + 1];
  }

  // Merge overlapping or touching intervals per pair.
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    return a.t0 < b.t0;
  });
  std::size_t merged = 0;
  std::vector<Row> out;
  out.reserve(rows.size());
  for (const Row& r : rows) {
    if (!out.empty() && out.back().u == r.u && out.back().v == r.v && r.t0 <= out.back().t1) {
      out.back().t1 = std::max(out.back().t1, r.t1);
      ++merged;
    } else {
      out.push_back(r);
    }
  }
  if (merged > 0) {
    result.warnings.push_back("merged " + std::to_string(merged) +
                              " overlapping contact interval(s)");
  }

  ContactTrace& trace = result.value;
  trace.provenance = TraceProvenance::imported;
  trace.n_nodes = n_nodes_override
                      ? *n_nodes_override
                      : static_cast<std::int32_t>(std::max<std::size_t>(result.id_mapping.size(), 2));
  double t_max = 0.0;
  for (const Row& r : out) {
    trace.events.push_back({r.t0, r.t1, static_cast<std::int32_t>(r.u),
                            static_cast<std::int32_t>(r.v)});
    t_max = std::max(t_max, r.t1);
  }
  trace.duration_h = duration_override ? *duration_override : std::max(t_max, 1e-9);
  trace.sort_events();
  trace.validate();
  return result;
}

// Reads the `u,v` schema into a deduplicated undirected graph. Self-loop rows
// are rejected with their line numbers.
inline ImportResult<SocialGraph> import_social_csv(std::string_view csv_text,
                                                   std::optional<std::int32_t> n_nodes_override = {}) {
  detail::CsvDoc doc = detail::parse_csv(csv_text, kSocialCsvHeader);

  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::vector<std::string> errors;
  for (const auto& [line_no, fields] : doc.rows) {
    if (fields.size() != 2) {
      detail::append_error(errors, line_no, "expected 2 fields, got " + std::to_string(fields.size()));
      continue;
    }
    try {
      std::int64_t u = parse_int(fields[0]);
      std::int64_t v = parse_int(fields[1]);
      if (u < 0 || v < 0) throw data_error("negative node id");
      if (u == v) throw data_error("self-loop");
      raw.push_back({u, v});
    } catch (const std::exception& e) {
      detail::append_error(errors, line_no, e.what());
    }
  }
  if (!errors.empty()) detail::raise_row_errors(errors);

  ImportResult<SocialGraph> result;
  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const auto& [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  result.id_mapping = detail::remap_ids(ids, n_nodes_override);

  SocialGraph& g = result.value;
  g.n_nodes = n_nodes_override ? *n_nodes_override
                               : static_cast<std::int32_t>(result.id_mapping.size());
  g.edges.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    g.edges.push_back({static_cast<std::int32_t>(ids[2 * i]),
                       static_cast<std::int32_t>(ids[2 * i + 1])});
  }
  g.canonicalize();
  g.validate();
  return result;
}

inline std::string id_mapping_to_csv(const IdMapping& mapping) {
  std::string out = "original_id,mapped_id\n";
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    out += std::to_string(mapping[i]);
    out += ',';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

// Unifies the proximity and social propagation paths into one time-sorted
// stream of directed opportunities.
//
// Proximity: each contact event fires at its start and again after every
// further whole slot it spans, both directions each time. Social: every edge
// fires in both directions once per slot, at t = k*slot for k >= 1, up to the
// horizon. Keys are stable functions of (trace index, slot, direction) and
// (edge index, slot, direction) respectively, never of the channel mix.
inline ExposureStream build_exposure_stream(const ContactTrace& trace, const SocialGraph& graph,
                                            const DualPathConfig& cfg) {
  cfg.validate();
  if (graph.n_nodes > 0 && graph.n_nodes != trace.n_nodes)
    throw data_error("exposure stream: trace and social graph disagree on node count");

  ExposureStream stream;
  stream.n_nodes = trace.n_nodes;
  stream.horizon_h = cfg.horizon_h;

  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const ContactEvent& e = trace.events[i];
    for (std::uint64_t rep = 0;; ++rep) {
      const double t = e.t_start_h + static_cast<double>(rep) * cfg.social_slot_h;
      if (t > e.t_end_h || t > cfg.horizon_h) break;
      stream.events.push_back({t, e.u, e.v, Channel::proximity,
                               make_event_key(Channel::proximity, i, rep, 0)});
      stream.events.push_back({t, e.v, e.u, Channel::proximity,
                               make_event_key(Channel::proximity, i, rep, 1)});
    }
  }
  for (std::size_t ei = 0; ei < graph.edges.size(); ++ei) {
    const auto& [u, v] = graph.edges[ei];
    const auto slots = static_cast<std::uint64_t>(std::floor(cfg.horizon_h / cfg.social_slot_h + 1e-9));
    for (std::uint64_t k = 1; k <= slots; ++k) {
      const double t = static_cast<double>(k) * cfg.social_slot_h;
      stream.events.push_back({t, u, v, Channel::social, make_event_key(Channel::social, ei, k, 0)});
      stream.events.push_back({t, v, u, Channel::social, make_event_key(Channel::social, ei, k, 1)});
    }
  }
  stream.sort_events();
  return stream;
}

}  // namespace epidemica
