#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "dyncon/oracle.hpp"
#include "dyncon/rng.hpp"
#include "dyncon/subgraph_conn.hpp"

using namespace dyncon;

namespace {

BaseGraph path_graph(uint32_t n) {
  auto g = BaseGraph::make(n);
  for (VertexId i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

BaseGraph star_graph(uint32_t leaves) {
  auto g = BaseGraph::make(leaves + 1);
  for (VertexId i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

std::string state_line(const std::string& state, const std::string& prefix) {
  size_t pos = 0;
  while (pos < state.size()) {
    size_t end = state.find('\n', pos);
    if (end == std::string::npos) end = state.size();
    std::string line = state.substr(pos, end - pos);
    if (line.rfind(prefix, 0) == 0) return line;
    pos = end + 1;
  }
  return {};
}

size_t count_of(const std::string& s, char c) {
  return static_cast<size_t>(std::count(s.begin(), s.end(), c));
}

void check_clean(const SubgraphConn& sc) {
  auto v = sc.audit();
  for (const auto& msg : v) {
    CAPTURE(msg);
    CHECK(false);
  }
  CHECK(v.empty());
}

SubgraphConfig cfg_of(uint64_t delta, uint64_t q) {
  SubgraphConfig c;
  c.delta = delta;
  c.q = q;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("subgraph_conn");

TEST_CASE("config defaults") {
  SubgraphConfig cfg;
  CHECK(cfg.delta == 1);
  CHECK(cfg.q == 1);
  CHECK(cfg.forced_high.empty());
}

TEST_CASE("path with low threshold keeps one high component") {
  auto g = path_graph(5);
  std::vector<char> act(5, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(2, 1000), act, &cnt);
  check_clean(sc);
  for (VertexId u = 0; u < 5; ++u)
    for (VertexId v = 0; v < 5; ++v) CHECK(sc.connected(u, v));
  auto state = sc.canonical_state();
  CHECK(state.find("deg=8 high") != std::string::npos);
  CHECK(state_line(state, "c:") == "c:");
}

TEST_CASE("path with high threshold fills the pair table") {
  auto g = path_graph(5);
  std::vector<char> act(5, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(10, 1000), act, &cnt);
  check_clean(sc);
  auto state = sc.canonical_state();
  CHECK(state.find("deg=8 low") != std::string::npos);
  // Every vertex touches the single low component: all 10 pairs.
  CHECK(count_of(state_line(state, "c:"), '=') == 10);

  sc.turn_off(2);
  check_clean(sc);
  CHECK(cnt.component_splits == 1);
  CHECK(state_line(sc.canonical_state(), "c:") ==
        "c: (0,1)=1 (0,2)=1 (1,2)=1 (2,3)=1 (2,4)=1 (3,4)=1");
  CHECK(sc.connected(0, 1));
  CHECK(sc.connected(3, 4));
  CHECK_FALSE(sc.connected(0, 4));
  CHECK_FALSE(sc.connected(1, 3));
}

TEST_CASE("incidence rows count only deletion-part neighbors") {
  auto g = path_graph(5);
  std::vector<char> act = {1, 1, 0, 0, 0};
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(10, 1000), act, &cnt);
  check_clean(sc);
  auto state = sc.canonical_state();
  CHECK(state.find("{0,1} deg=3 low") != std::string::npos);
}

TEST_CASE("star center bridges singleton components through the buffer") {
  auto g = star_graph(5);
  std::vector<char> act(6, 1);
  act[0] = 0;
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(1, 1000), act, &cnt);
  check_clean(sc);
  CHECK_FALSE(sc.connected(1, 2));
  CHECK(state_line(sc.canonical_state(), "c:") == "c:");
  sc.turn_on(0);
  check_clean(sc);
  for (VertexId a = 1; a <= 5; ++a)
    for (VertexId b = 1; b <= 5; ++b) CHECK(sc.connected(a, b));
  sc.turn_off(0);
  check_clean(sc);
  CHECK_FALSE(sc.connected(4, 5));
}

TEST_CASE("buffer vertices chain onto a low component") {
  auto g = path_graph(5);
  std::vector<char> act = {1, 1, 1, 0, 0};
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(10, 1000), act, &cnt);
  sc.turn_on(3);
  sc.turn_on(4);
  CHECK(sc.q_size() == 2);
  check_clean(sc);
  CHECK(sc.connected(3, 0));
  CHECK(sc.connected(4, 0));
  CHECK(sc.connected(4, 1));
  CHECK(sc.connected(4, 3));
}

TEST_CASE("degree-sensitive path: no high vertices, buffer edges only") {
  auto g = path_graph(5);
  std::vector<char> act(5, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::DegreeSensitive, cfg_of(2, 1000), act, &cnt);
  check_clean(sc);
  CHECK(state_line(sc.canonical_state(), "c:") == "c:");
  sc.turn_off(2);
  check_clean(sc);
  CHECK(sc.connected(0, 1));
  CHECK_FALSE(sc.connected(0, 4));
  sc.turn_on(2);
  check_clean(sc);
  CHECK(sc.connected(0, 4));
}

TEST_CASE("degree-sensitive star: high hub found by the fallback scan") {
  auto g = star_graph(5);
  std::vector<char> act(6, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::DegreeSensitive, cfg_of(2, 1000), act, &cnt);
  check_clean(sc);
  sc.turn_off(0);
  check_clean(sc);
  CHECK_FALSE(sc.connected(1, 2));
  // The hub is degree 5 of 5 edges: high.  Reactivated, it carries no (b')
  // edges of its own, so queries must find it by scanning high vertices.
  sc.turn_on(0);
  check_clean(sc);
  CHECK(sc.connected(1, 2));
  CHECK(sc.connected(3, 5));
}

TEST_CASE("dynamic edges connect and disconnect isolated vertices") {
  auto g = BaseGraph::make(2);
  std::vector<char> act(2, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(1, 1000), act, &cnt);
  CHECK_FALSE(sc.connected(0, 1));
  auto h = sc.add_dyn_edge(0, 1);
  CHECK(sc.dyn_edge_alive(h));
  check_clean(sc);
  CHECK(sc.connected(0, 1));
  sc.remove_dyn_edge(h);
  CHECK_FALSE(sc.dyn_edge_alive(h));
  check_clean(sc);
  CHECK_FALSE(sc.connected(0, 1));
}

TEST_CASE("dynamic edge helpers survive the phase boundary") {
  auto g = BaseGraph::make(2);
  std::vector<char> act(2, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::DegreeSensitive, cfg_of(1, 1000), act, &cnt);
  auto h = sc.add_dyn_edge(0, 1);
  sc.rebuild_phase();
  check_clean(sc);
  CHECK(sc.q_size() == 0);
  CHECK(sc.connected(0, 1));
  // The helper now sits in the deletion part; removal splits its record.
  sc.remove_dyn_edge(h);
  check_clean(sc);
  CHECK_FALSE(sc.connected(0, 1));
}

TEST_CASE("dormant half edges wake with their endpoint") {
  auto g = BaseGraph::make(2);
  std::vector<char> act = {1, 0};
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(1, 1000), act, &cnt);
  auto h = sc.add_dyn_edge(0, 1);
  (void)h;
  check_clean(sc);
  sc.turn_on(1);
  check_clean(sc);
  CHECK(sc.connected(0, 1));
  sc.turn_off(1);
  check_clean(sc);
  CHECK_FALSE(sc.is_active(1));
}

TEST_CASE("added vertices participate like base vertices") {
  auto g = BaseGraph::make(2);
  std::vector<char> act(2, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(1, 1000), act, &cnt);
  VertexId v = sc.add_vertex();
  CHECK(v == 2);
  CHECK_FALSE(sc.is_active(v));
  sc.turn_on(v);
  check_clean(sc);
  CHECK_FALSE(sc.connected(0, v));
  sc.add_dyn_edge(0, v);
  check_clean(sc);
  CHECK(sc.connected(0, v));
  CHECK_FALSE(sc.connected(1, v));
}

TEST_CASE("phase countdown rebuilds automatically") {
  auto g = path_graph(5);
  std::vector<char> act(5, 0);
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(2, 3), act, &cnt);
  sc.turn_on(0);
  sc.turn_on(1);
  CHECK(sc.q_size() == 2);
  sc.turn_on(2);
  CHECK(sc.q_size() == 0);  // third update closed the phase
  check_clean(sc);
  CHECK(sc.connected(0, 2));
}

TEST_CASE("rebuild is idempotent on the canonical state") {
  SplitMix64 rng(31);
  auto g = path_graph(8);
  g.add_edge(0, 7);
  g.add_edge(2, 5);
  std::vector<char> act(8, 1);
  Counters cnt;
  SubgraphConn sc(g, Policy::Classic, cfg_of(3, 1000), act, &cnt);
  sc.turn_off(3);
  sc.turn_off(6);
  sc.turn_on(3);
  sc.add_dyn_edge(1, 4);
  sc.rebuild_phase();
  check_clean(sc);
  auto s1 = sc.canonical_state();
  sc.rebuild_phase();
  check_clean(sc);
  CHECK(sc.canonical_state() == s1);
}

TEST_CASE("random workloads match the oracle under audit") {
  for (Policy pol : {Policy::Classic, Policy::DegreeSensitive}) {
    for (uint64_t seed : {11ull, 12ull, 13ull}) {
      SplitMix64 rng(seed);
      const uint32_t n = 18;
      auto g = BaseGraph::make(n);
      for (int i = 0; i < 30; ++i)
        g.add_edge(static_cast<VertexId>(rng.below(n)),
                   static_cast<VertexId>(rng.below(n)));
      std::vector<char> act(n);
      for (auto& a : act) a = rng.below(2) != 0;
      Counters cnt;
      uint64_t delta = 2 + rng.below(4);
      uint64_t q = seed % 2 ? 7 : 1000;
      SubgraphConn sc(g, pol, cfg_of(delta, q), act, &cnt);

      struct LiveDyn {
        SubgraphConn::EdgeHandle h;
        VertexId u, v, z;
      };
      std::vector<LiveDyn> dyns;
      auto oracle_check = [&]() {
        auto aug = BaseGraph::make(sc.n_universe());
        for (const auto& [u, v] : g.edges) aug.add_edge(u, v);
        for (const auto& d : dyns) {
          aug.add_edge(d.u, d.z);
          aug.add_edge(d.z, d.v);
        }
        std::vector<char> a(aug.n);
        for (VertexId v = 0; v < aug.n; ++v) a[v] = sc.is_active(v);
        auto labels = oracle_partition_subgraph(aug, a);
        for (VertexId u = 0; u < aug.n; ++u)
          for (VertexId v = u; v < aug.n; ++v) {
            if (!a[u] || !a[v]) continue;
            bool got = sc.connected(u, v);
            bool want = labels[u] == labels[v];
            if (got != want) {
              CAPTURE(u);
              CAPTURE(v);
              CHECK(got == want);
            }
          }
      };

      for (int step = 0; step < 300; ++step) {
        uint64_t r = rng.below(100);
        if (r < 30) {
          VertexId v = static_cast<VertexId>(rng.below(n));
          if (!sc.is_active(v))
            sc.turn_on(v);
          else
            sc.turn_off(v);
        } else if (r < 45) {
          VertexId u = static_cast<VertexId>(rng.below(n));
          VertexId v = static_cast<VertexId>(rng.below(n));
          auto h = sc.add_dyn_edge(u, v);
          dyns.push_back({h, u, v, sc.n_universe() - 1});
        } else if (r < 60 && !dyns.empty()) {
          size_t k = rng.below(dyns.size());
          sc.remove_dyn_edge(dyns[k].h);
          dyns[k] = dyns.back();
          dyns.pop_back();
        } else {
          VertexId u = static_cast<VertexId>(rng.below(n));
          VertexId v = static_cast<VertexId>(rng.below(n));
          if (sc.is_active(u) && sc.is_active(v)) {
            auto aug = BaseGraph::make(sc.n_universe());
            for (const auto& [eu, ev] : g.edges) aug.add_edge(eu, ev);
            for (const auto& d : dyns) {
              aug.add_edge(d.u, d.z);
              aug.add_edge(d.z, d.v);
            }
            std::vector<char> a(aug.n);
            for (VertexId x = 0; x < aug.n; ++x) a[x] = sc.is_active(x);
            CHECK(sc.connected(u, v) ==
                  oracle_connected_subgraph(aug, a, u, v));
          }
        }
        if (step % 25 == 0) {
          check_clean(sc);
          oracle_check();
        }
      }
      check_clean(sc);
      oracle_check();
    }
  }
}

TEST_SUITE_END();
