#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

#include "epidemica/rng.hpp"
#include "epidemica/traces.hpp"

using namespace epidemica;
using Catch::Approx;

TEST_CASE("contact import: header-only file yields an empty trace") {
  const auto r = import_contact_csv("t_start,t_end,u,v\n");
  REQUIRE(r.value.events.empty());
  REQUIRE(r.warnings.empty());
}

TEST_CASE("contact import: rows out of order come back sorted, content-identical") {
  const std::string csv =
      "t_start,t_end,u,v\n"
      "3.0,3.5,0,2\n"
      "1.0,1.5,1,0\n"
      "2.0,2.5,0,1\n";
  const auto r = import_contact_csv(csv);
  REQUIRE(r.value.events.size() == 3);
  REQUIRE(r.value.events[0] == ContactEvent{1.0, 1.5, 0, 1});
  REQUIRE(r.value.events[1] == ContactEvent{2.0, 2.5, 0, 1});
  REQUIRE(r.value.events[2] == ContactEvent{3.0, 3.5, 0, 2});
  // Idempotent under a second pass.
  const auto r2 = import_contact_csv(to_csv(r.value));
  REQUIRE(r2.value.events == r.value.events);
}

TEST_CASE("contact import: export/import round trip is exact") {
  ContactTrace trace;
  trace.n_nodes = 7;
  trace.duration_h = 50.0;
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    const auto u = static_cast<std::int32_t>(rng.uniform_index(7));
    auto v = static_cast<std::int32_t>(rng.uniform_index(7));
    if (u == v) v = (v + 1) % 7;
    const double t0 = rng.uniform(0.0, 49.0);
    trace.events.push_back({t0, t0 + rng.uniform(0.001, 0.9), std::min(u, v), std::max(u, v)});
  }
  trace.sort_events();
  // Overlaps for a pair would be merged on import; drop them so the round
  // trip is a pure identity.
  ContactTrace clean;
  clean.n_nodes = 7;
  clean.duration_h = 50.0;
  std::map<std::pair<int, int>, double> last_end;
  for (const ContactEvent& e : trace.events) {
    auto key = std::make_pair(int(e.u), int(e.v));
    if (!last_end.count(key) || e.t_start_h > last_end[key]) {
      clean.events.push_back(e);
      last_end[key] = e.t_end_h;
    }
  }
  const auto r = import_contact_csv(to_csv(clean), clean.n_nodes, clean.duration_h);
  REQUIRE(r.value.events == clean.events);
  REQUIRE(to_csv(r.value) == to_csv(clean));
}

TEST_CASE("contact import: malformed rows are reported with line numbers") {
  const std::string csv =
      "t_start,t_end,u,v\n"
      "0.5,1.0,0,1\n"
      "oops,1.0,0,1\n"
      "2.0,1.0,0,1\n"
      "3.0,3.5,2,2\n";
  try {
    import_contact_csv(csv);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("line 3") != std::string::npos);
    REQUIRE(msg.find("line 4") != std::string::npos);
    REQUIRE(msg.find("line 5") != std::string::npos);
    REQUIRE(msg.find("self-contact") != std::string::npos);
  }
}

TEST_CASE("contact import: overlapping intervals merge with a warning") {
  const std::string csv =
      "t_start,t_end,u,v\n"
      "1.0,2.0,0,1\n"
      "1.5,3.0,1,0\n"
      "5.0,6.0,0,1\n";
  const auto r = import_contact_csv(csv);
  REQUIRE(r.value.events.size() == 2);
  REQUIRE(r.value.events[0] == ContactEvent{1.0, 3.0, 0, 1});
  REQUIRE(r.warnings.size() == 1);
  REQUIRE(r.warnings[0].find("merged 1") != std::string::npos);
}

TEST_CASE("contact import: sparse ids remap densely with the mapping emitted") {
  const std::string csv =
      "t_start,t_end,u,v\n"
      "1.0,2.0,10,40\n"
      "2.0,3.0,40,25\n";
  const auto r = import_contact_csv(csv);
  REQUIRE(r.value.n_nodes == 3);
  REQUIRE(r.id_mapping == IdMapping{10, 25, 40});
  REQUIRE(r.value.events[0] == ContactEvent{1.0, 2.0, 0, 2});
  REQUIRE(r.value.events[1] == ContactEvent{2.0, 3.0, 1, 2});
  REQUIRE(id_mapping_to_csv(r.id_mapping) == "original_id,mapped_id\n10,0\n25,1\n40,2\n");
  // Forcing the node count keeps ids verbatim.
  const auto forced = import_contact_csv(csv, 64);
  REQUIRE(forced.value.n_nodes == 64);
  REQUIRE(forced.value.events[0].u == 10);
}

TEST_CASE("social import: empty, dedup, self-loop") {
  REQUIRE(import_social_csv("u,v\n").value.edges.empty());

  const auto dup = import_social_csv("u,v\n1,2\n2,1\n");
  REQUIRE(dup.value.edges.size() == 1);
  REQUIRE(dup.value.edges[0] == std::pair<std::int32_t, std::int32_t>{0, 1});

  try {
    import_social_csv("u,v\n1,2\n3,3\n");
    FAIL("expected data_error");
  } catch (const data_error& e) {
    REQUIRE(std::string(e.what()).find("line 3") != std::string::npos);
    REQUIRE(std::string(e.what()).find("self-loop") != std::string::npos);
  }
}

TEST_CASE("social import: path graph degree sequence") {
  const auto r = import_social_csv("u,v\n0,1\n1,2\n", 3);
  REQUIRE(r.value.degrees() == std::vector<std::int32_t>{1, 2, 1});
}

TEST_CASE("exposure stream: empty inputs yield an empty stream") {
  ContactTrace trace;
  trace.n_nodes = 4;
  trace.duration_h = 2.0;
  SocialGraph graph;
  graph.n_nodes = 4;
  DualPathConfig cfg{0.05, 0.05, 0.25, 2.0};
  REQUIRE(build_exposure_stream(trace, graph, cfg).events.empty());
}

TEST_CASE("exposure stream: one social edge, slot 1h, horizon 2h gives 4 opportunities") {
  ContactTrace trace;
  trace.n_nodes = 2;
  trace.duration_h = 2.0;
  SocialGraph graph;
  graph.n_nodes = 2;
  graph.edges = {{0, 1}};
  DualPathConfig cfg{0.05, 0.05, 1.0, 2.0};
  const ExposureStream stream = build_exposure_stream(trace, graph, cfg);
  REQUIRE(stream.events.size() == 4);
  std::multiset<std::tuple<double, int, int>> got;
  for (const ExposureEvent& e : stream.events) {
    REQUIRE(e.channel == Channel::social);
    got.insert({e.t_h, e.src, e.dst});
  }
  const std::multiset<std::tuple<double, int, int>> want{
      {1.0, 0, 1}, {1.0, 1, 0}, {2.0, 0, 1}, {2.0, 1, 0}};
  REQUIRE(got == want);
}

TEST_CASE("exposure stream: opportunity multiset matches exhaustive enumeration") {
  ContactTrace trace;
  trace.n_nodes = 4;
  trace.duration_h = 3.0;
  trace.events = {{0.1, 0.2, 0, 1},   // single opportunity (shorter than a slot)
                  {0.5, 1.6, 1, 2},   // spans slots: 0.5, 1.0, 1.5
                  {2.9, 3.0, 0, 3}};
  SocialGraph graph;
  graph.n_nodes = 4;
  graph.edges = {{0, 2}, {1, 3}};
  DualPathConfig cfg{0.05, 0.05, 0.5, 3.0};
  const ExposureStream stream = build_exposure_stream(trace, graph, cfg);

  // Brute-force enumeration of the expected (t, src, dst, channel) multiset.
  std::multiset<std::tuple<double, int, int, int>> want;
  const auto add_pair = [&](double t, int a, int b, Channel c) {
    want.insert({t, a, b, static_cast<int>(c)});
    want.insert({t, b, a, static_cast<int>(c)});
  };
  add_pair(0.1, 0, 1, Channel::proximity);
  add_pair(0.5, 1, 2, Channel::proximity);
  add_pair(1.0, 1, 2, Channel::proximity);
  add_pair(1.5, 1, 2, Channel::proximity);
  add_pair(2.9, 0, 3, Channel::proximity);
  for (int k = 1; k <= 6; ++k) {
    add_pair(0.5 * k, 0, 2, Channel::social);
    add_pair(0.5 * k, 1, 3, Channel::social);
  }
  std::multiset<std::tuple<double, int, int, int>> got;
  for (const ExposureEvent& e : stream.events)
    got.insert({e.t_h, e.src, e.dst, static_cast<int>(e.channel)});
  REQUIRE(got == want);

  // Sorted with unique keys.
  REQUIRE_NOTHROW(stream.validate());
  std::set<std::uint64_t> keys;
  for (const ExposureEvent& e : stream.events) REQUIRE(keys.insert(e.event_key).second);
}

TEST_CASE("exposure stream: channel separability and the superset property") {
  ContactTrace trace;
  trace.n_nodes = 3;
  trace.duration_h = 4.0;
  trace.events = {{0.3, 0.4, 0, 1}, {1.1, 1.2, 1, 2}};
  SocialGraph none;
  none.n_nodes = 3;
  SocialGraph graph;
  graph.n_nodes = 3;
  graph.edges = {{0, 2}};
  DualPathConfig cfg{0.05, 0.05, 1.0, 4.0};

  const ExposureStream prox_only = build_exposure_stream(trace, none, cfg);
  const ExposureStream both = build_exposure_stream(trace, graph, cfg);

  // The proximity restriction of `both` is exactly `prox_only`, keys included.
  std::vector<ExposureEvent> prox_of_both;
  for (const ExposureEvent& e : both.events)
    if (e.channel == Channel::proximity) prox_of_both.push_back(e);
  REQUIRE(prox_of_both == prox_only.events);
  REQUIRE(both.events.size() == prox_only.events.size() + 2 * 4);

  // Social restriction is independent of the contact trace.
  ContactTrace other;
  other.n_nodes = 3;
  other.duration_h = 4.0;
  const ExposureStream social_only = build_exposure_stream(other, graph, cfg);
  std::vector<ExposureEvent> social_of_both;
  for (const ExposureEvent& e : both.events)
    if (e.channel == Channel::social) social_of_both.push_back(e);
  REQUIRE(social_of_both == social_only.events);
}

TEST_CASE("exposure stream: node count mismatch is rejected") {
  ContactTrace trace;
  trace.n_nodes = 3;
  trace.duration_h = 1.0;
  SocialGraph graph;
  graph.n_nodes = 5;
  DualPathConfig cfg{0.1, 0.1, 0.5, 1.0};
  REQUIRE_THROWS_AS(build_exposure_stream(trace, graph, cfg), data_error);
}
