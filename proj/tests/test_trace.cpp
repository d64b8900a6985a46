#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "dyncon/trace.hpp"

using namespace dyncon;

namespace {

Trace parse(const std::string& text) {
  std::istringstream is(text);
  return parse_trace(is);
}

int error_line(const std::string& text) {
  std::istringstream is(text);
  try {
    parse_trace(is);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

bool same_event(const TraceEvent& a, const TraceEvent& b) {
  return a.kind == b.kind && a.u == b.u && a.v == b.v &&
         a.handle == b.handle && a.id == b.id && a.id2 == b.id2 &&
         a.lo == b.lo && a.hi == b.hi;
}

bool same_trace(const Trace& a, const Trace& b) {
  if (a.mode != b.mode || a.dim != b.dim || a.g.n != b.g.n ||
      a.g.edges != b.g.edges || a.events.size() != b.events.size())
    return false;
  for (size_t i = 0; i < a.events.size(); ++i)
    if (!same_event(a.events[i], b.events[i])) return false;
  return true;
}

}  // namespace

TEST_SUITE_BEGIN("trace");

TEST_CASE("a subgraph trace parses with comments and round-trips") {
  std::string text =
      "# three-path smoke trace\n"
      "graph 3\n"
      "edge 0 1\n"
      "\n"
      "edge 1 2  # second edge\n"
      "on 0\n"
      "on 1\n"
      "conn 0 1\n"
      "off 1\n"
      "on 2\n"
      "conn 0 2\n";
  Trace t = parse(text);
  CHECK(t.mode == TraceMode::Subgraph);
  CHECK(t.g.n == 3);
  REQUIRE(t.g.m() == 2);
  CHECK(t.g.edges[0] == std::pair<VertexId, VertexId>{0, 1});
  CHECK(t.g.edges[1] == std::pair<VertexId, VertexId>{1, 2});
  REQUIRE(t.events.size() == 6);
  CHECK(t.events[0].kind == EventKind::On);
  CHECK(t.events[0].u == 0);
  CHECK(t.events[0].line == 6);
  CHECK(t.events[2].kind == EventKind::Conn);
  CHECK(t.events[2].v == 1);
  CHECK(t.events[3].kind == EventKind::Off);
  CHECK(t.events[5].line == 11);

  std::string canon = serialize_trace(t);
  CHECK(canon ==
        "graph 3\n"
        "edge 0 1\n"
        "edge 1 2\n"
        "on 0\n"
        "on 1\n"
        "conn 0 1\n"
        "off 1\n"
        "on 2\n"
        "conn 0 2\n");
  CHECK(same_trace(parse(canon), t));
}

TEST_CASE("a geometric trace parses and round-trips") {
  std::string text =
      "geom 2\n"
      "insert 0 box 2 -3 4 0 0\n"
      "insert 7 box 2 2 2 -1 5\n"
      "conn 0 7\n"
      "delete 0\n"
      "insert 0 box 2 10 11 10 11\n"
      "conn 0 0\n";
  Trace t = parse(text);
  CHECK(t.mode == TraceMode::Geom);
  CHECK(t.dim == 2);
  REQUIRE(t.events.size() == 6);
  CHECK(t.events[0].kind == EventKind::Insert);
  CHECK(t.events[0].id == 0);
  CHECK(t.events[0].lo == std::vector<int64_t>{-3, 0});
  CHECK(t.events[0].hi == std::vector<int64_t>{4, 0});
  CHECK(t.events[2].kind == EventKind::GConn);
  CHECK(t.events[2].id == 0);
  CHECK(t.events[2].id2 == 7);
  CHECK(t.events[3].kind == EventKind::Delete);

  std::string canon = serialize_trace(t);
  CHECK(canon ==
        "geom 2\n"
        "insert 0 box 2 -3 4 0 0\n"
        "insert 7 box 2 2 2 -1 5\n"
        "conn 0 7\n"
        "delete 0\n"
        "insert 0 box 2 10 11 10 11\n"
        "conn 0 0\n");
  CHECK(same_trace(parse(canon), t));
}

TEST_CASE("handle reuse after release is accepted") {
  Trace t = parse(
      "graph 4\n"
      "adde 0 1 5\n"
      "dele 5\n"
      "adde 2 3 5\n");
  CHECK(t.events.size() == 3);
  CHECK(t.events[2].handle == 5);
}

TEST_CASE("parse errors carry the offending line number") {
  struct Case {
    const char* text;
    int line;
  };
  const Case cases[] = {
      {"", 1},                                            // missing header
      {"# only a comment\n", 1},                          // still no header
      {"graph\n", 1},                                     // header arity
      {"matrix 3\n", 1},                                  // unknown header
      {"graph 4294967296\n", 1},                          // n over 32 bits
      {"geom 0\n", 1},                                    // dimension range
      {"graph 3\nedge 0 3\n", 2},                         // endpoint range
      {"graph 3\nedge 1 1\n", 2},                         // self-loop edge
      {"graph 3\non 0\nedge 0 1\n", 3},                   // edge after events
      {"graph 3\non 3\n", 2},                             // vertex range
      {"graph 3\non x\n", 2},                             // non-integer
      {"graph 3\non -1\n", 2},                            // negative vertex
      {"graph 3\non 0\non 0\n", 3},                       // already on
      {"graph 3\noff 0\n", 2},                            // already off
      {"graph 3\non 0\nconn 0 1\n", 3},                   // off endpoint
      {"graph 3\nadde 0 1 4\nadde 1 2 4\n", 3},           // handle in use
      {"graph 3\nadde 2 2 4\n", 2},                       // self-loop adde
      {"graph 3\ndele 9\n", 2},                           // unknown handle
      {"graph 3\npoke 0\n", 2},                           // unknown command
      {"geom 1\ninsert 0 box 1 5\n", 2},                  // insert arity
      {"geom 1\ninsert 0 cube 1 0 5\n", 2},               // missing 'box'
      {"geom 2\ninsert 0 box 1 0 5\n", 2},                // dimension mismatch
      {"geom 1\ninsert 0 box 1 5 4\n", 2},                // lo > hi
      {"geom 1\ninsert 0 box 1 0 5\ninsert 0 box 1 1 2\n", 3},  // id live
      {"geom 1\ndelete 3\n", 2},                          // id not live
      {"geom 1\ninsert 0 box 1 0 5\nconn 0 1\n", 3},      // conn dead id
      {"geom 1\non 0\n", 2},                              // subgraph command
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    CHECK(error_line(c.text) == c.line);
  }
}

TEST_CASE("generation is deterministic and exactly sized") {
  GenConfig cfg;
  cfg.mode = TraceMode::Subgraph;
  cfg.n = 12;
  cfg.ops = 100;
  cfg.seed = 42;
  std::string a = gen_trace(cfg), b = gen_trace(cfg);
  CHECK(a == b);
  CHECK(a.substr(0, 10) == "# seed 42\n");

  cfg.seed = 43;
  CHECK(gen_trace(cfg) != a);

  cfg.seed = 42;
  Trace t = parse(a);
  CHECK(t.g.n == 12);
  CHECK(t.g.m() == 30);  // ceil(2.5 * 12)
  CHECK(t.events.size() == 100);

  cfg.mode = TraceMode::Geom;
  cfg.dim = 2;
  Trace gt = parse(gen_trace(cfg));
  CHECK(gt.dim == 2);
  CHECK(gt.events.size() == 100);
}

TEST_CASE("a three-ratio mix draws only the named kinds") {
  GenConfig cfg;
  cfg.mode = TraceMode::Subgraph;
  cfg.n = 10;
  cfg.ops = 100;
  cfg.seed = 7;
  cfg.mix = {0.4, 0.4, 0.2};  // on, off, conn; no dynamic edges
  Trace t = parse(gen_trace(cfg));
  CHECK(t.events.size() == 100);
  for (const auto& ev : t.events) {
    CHECK(ev.kind != EventKind::AddE);
    CHECK(ev.kind != EventKind::DelE);
  }
}

TEST_CASE("generated traces always parse back canonically") {
  std::vector<std::vector<double>> subgraph_mixes = {
      {}, {0, 0, 1}, {0.1, 0.1, 0.1, 0.2, 0.5}, {0.2, 0.6, 0.2}};
  for (uint64_t seed = 0; seed < 6; ++seed)
    for (const auto& mix : subgraph_mixes) {
      GenConfig cfg;
      cfg.mode = TraceMode::Subgraph;
      cfg.n = seed == 0 ? 1 : static_cast<uint32_t>(2 + 7 * seed);
      cfg.ops = 120;
      cfg.seed = seed;
      cfg.mix = mix;
      std::string text = gen_trace(cfg);
      Trace t = parse(text);
      CHECK(t.events.size() == 120);
      // gen output is the seed comment plus the canonical form
      CHECK(text.substr(text.find('\n') + 1) == serialize_trace(t));
    }

  std::vector<std::vector<double>> geom_mixes = {
      {}, {0.1, 0.8, 0.1}, {0, 0, 1}, {0.9, 0.05, 0.05}};
  for (uint64_t seed = 0; seed < 6; ++seed)
    for (const auto& mix : geom_mixes)
      for (int dim : {1, 2, 3}) {
        GenConfig cfg;
        cfg.mode = TraceMode::Geom;
        cfg.n = static_cast<uint32_t>(4 + 5 * seed);
        cfg.ops = 120;
        cfg.seed = seed;
        cfg.dim = dim;
        cfg.mix = mix;
        std::string text = gen_trace(cfg);
        Trace t = parse(text);
        CHECK(t.events.size() == 120);
        CHECK(text.substr(text.find('\n') + 1) == serialize_trace(t));
      }
}

TEST_CASE("generator rejects unusable configurations") {
  GenConfig cfg;
  cfg.mode = TraceMode::Subgraph;
  cfg.n = 0;
  cfg.ops = 5;
  CHECK_THROWS_AS(gen_trace(cfg), ConfigError);

  cfg.n = 4;
  cfg.mix = {0.5, 0.5, 0.0, 0.0, 0.0, 0.5};
  CHECK_THROWS_AS(gen_trace(cfg), ConfigError);

  cfg.mix = {0.5, -0.5, 1.0};
  CHECK_THROWS_AS(gen_trace(cfg), ConfigError);

  cfg.mix = {0, 0, 0};
  CHECK_THROWS_AS(gen_trace(cfg), ConfigError);

  cfg.mix.clear();
  cfg.mode = TraceMode::Geom;
  cfg.dim = 0;
  CHECK_THROWS_AS(gen_trace(cfg), ConfigError);
}

TEST_SUITE_END();
