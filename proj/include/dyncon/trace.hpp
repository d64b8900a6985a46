#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dyncon/core.hpp"

namespace dyncon {

enum class TraceMode { Subgraph, Geom };

struct Trace {
  TraceMode mode = TraceMode::Subgraph;
  BaseGraph g;        // Subgraph mode
  int dim = 0;        // Geom mode
  std::vector<TraceEvent> events;
};

// Grammar ('#' starts a comment anywhere):
//   subgraph:  graph <n>; edge <u> <v>...; then events
//              on <v> | off <v> | conn <u> <v> | adde <u> <v> <handle> |
//              dele <handle>
//   geometric: geom <d>; then events
//              insert <id> box <d> <a1> <b1> ... <ad> <bd> |
//              delete <id> | conn <id1> <id2>
// The parser validates the full event semantics against the evolving trace
// state, so accepted traces never trip an engine precondition: ranges and
// arity, toggle alternation from the all-off start, handle and object-id
// freshness/liveness (reuse after removal is fine), active/live endpoints
// for conn, box dimension and lo <= hi per axis.  Self-loop edges are
// rejected.  Errors carry 1-based line numbers.
Trace parse_trace(std::istream& in);

std::string serialize_trace(const Trace& t);

struct GenConfig {
  TraceMode mode = TraceMode::Subgraph;
  uint32_t n = 16;       // vertices (subgraph) or target live objects (geom)
  uint32_t ops = 100;
  uint64_t seed = 0;
  int dim = 1;           // geom only
  // Event mix; normalized over the mode's event kinds in declaration order:
  // subgraph on,off,conn,adde,dele; geom insert,delete,conn.  An infeasible
  // draw falls back deterministically (off->on when nothing is active,
  // delete->insert when nothing is alive, and so on).
  std::vector<double> mix;
};

// Deterministic trace text for the seed, beginning with "# seed <seed>".
// Always parses back; subgraph traces carry ceil(2.5 n) random edges (n >= 2),
// boxes live in [0, 4n]^d.  Emits exactly cfg.ops events.
std::string gen_trace(const GenConfig& cfg);

}  // namespace dyncon
