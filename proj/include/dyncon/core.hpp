#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dyncon {

using VertexId = uint32_t;

// Raised for malformed trace or graph input; line is 1-based.
struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
};

// Raised for invalid run configurations (bad mode/parameter combinations).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Static multigraph over vertices 0..n-1.  Parallel edges and self-loops are
// kept; a self-loop appears twice in its endpoint's adjacency list so that
// adj[v].size() is always the graph-theoretic degree.
struct BaseGraph {
  struct Arc {
    VertexId to;
    uint32_t eidx;  // index into edges
  };

  uint32_t n = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::vector<Arc>> adj;

  static BaseGraph make(uint32_t n) {
    BaseGraph g;
    g.n = n;
    g.adj.resize(n);
    return g;
  }

  uint32_t m() const { return static_cast<uint32_t>(edges.size()); }
  uint32_t deg(VertexId v) const { return static_cast<uint32_t>(adj[v].size()); }

  void add_edge(VertexId u, VertexId v);
  void add_vertex() {
    ++n;
    adj.emplace_back();
  }
};

enum class EventKind { On, Off, Conn, AddE, DelE, Insert, Delete, GConn };

// One trace event.  Field use depends on kind:
//   On/Off: u;  Conn: u,v;  AddE: u,v,handle;  DelE: handle;
//   Insert: obj;  Delete/GConn: id (and id2 for GConn).
struct TraceEvent {
  EventKind kind;
  VertexId u = 0, v = 0;
  int64_t handle = -1;
  int64_t id = -1, id2 = -1;
  std::vector<int64_t> lo, hi;  // Insert geometry
  int line = 0;
};

// Reads a complete vertex/edge description: "graph <n>" followed by
// "edge <u> <v>" lines.  Comments ('#' to end of line) and blank lines are
// ignored.  Any other content is a ParseError.
BaseGraph load_graph(std::istream& in);

// Canonical text form, suitable for load_graph round trips.
std::string serialize_graph(const BaseGraph& g);

}  // namespace dyncon
