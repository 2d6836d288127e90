#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "epidemica/io.hpp"

namespace epidemica {

// Undirected simple graph; edges stored with u < v, sorted, deduplicated.
struct SocialGraph {
  std::int32_t n_nodes = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;

  void canonicalize() {
    for (auto& [u, v] : edges) {
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  void validate() const {
    for (const auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes)
        throw data_error("social graph: node id out of range");
      if (u == v) throw data_error("social graph: self-loop");
      if (!(u < v)) throw data_error("social graph: edges must be canonical (u < v)");
    }
  }

  std::vector<std::int32_t> degrees() const {
    std::vector<std::int32_t> deg(static_cast<std::size_t>(n_nodes), 0);
    for (const auto& [u, v] : edges) {
      ++deg[static_cast<std::size_t>(u)];
      ++deg[static_cast<std::size_t>(v)];
    }
    return deg;
  }
};

inline constexpr const char* kSocialCsvHeader = "u,v";

inline std::string to_csv(const SocialGraph& g) {
  std::string out = kSocialCsvHeader;
  out += '\n';
  for (const auto& [u, v] : g.edges) {
    out += std::to_string(u);
    out += ',';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

}  // namespace epidemica
