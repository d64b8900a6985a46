#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dyncon/core.hpp"
#include "dyncon/counters.hpp"

namespace dyncon {

enum class Policy { Classic, DegreeSensitive };

struct SubgraphConfig {
  uint64_t delta = 1;  // component (and vertex) degree threshold
  uint64_t q = 1;      // updates per phase
  // Optional class override: vertex v is high iff forced_high[v] (indices
  // past the vector's end are low).  Empty = classify by base degree
  // (DegreeSensitive) or not at all (Classic).
  std::vector<char> forced_high;
};

// Connectivity in the subgraph induced by the active vertices of a fixed
// multigraph, with vertex activations/deactivations and edge updates
// simulated through degree-2 helper vertices.  Inactive vertices are split
// into a deletion-only part P (component records, pair table C) and a small
// fully dynamic buffer Q rebuilt every q updates.
class SubgraphConn {
 public:
  struct EdgeHandle {
    uint32_t slot = 0;
    uint32_t gen = 0;
  };

  SubgraphConn(const BaseGraph& g, Policy policy, SubgraphConfig cfg,
               const std::vector<char>& initially_active, Counters* counters);
  ~SubgraphConn();
  SubgraphConn(const SubgraphConn&) = delete;
  SubgraphConn& operator=(const SubgraphConn&) = delete;

  void turn_on(VertexId v);
  void turn_off(VertexId v);
  bool connected(VertexId u, VertexId v) const;  // both endpoints active

  // Appends an isolated, inactive vertex outside the base graph (no base
  // edges; usable with turn_on/off and dynamic edges like any other vertex).
  VertexId add_vertex();

  // Edge update simulation: a fresh always-active helper vertex adjacent to
  // u and v.  Endpoints must exist; they may be inactive (the half edge to an
  // inactive endpoint stays dormant until that endpoint activates).
  EdgeHandle add_dyn_edge(VertexId u, VertexId v);
  void remove_dyn_edge(EdgeHandle h);
  bool dyn_edge_alive(EdgeHandle h) const;

  // Forces the phase boundary: everything active moves to P, Q empties, the
  // incidence and pair tables are recomputed.
  void rebuild_phase();

  bool is_active(VertexId v) const;
  uint32_t n_universe() const;  // base vertices + helper slots ever created
  uint64_t delta() const;
  uint64_t q() const;
  uint64_t q_size() const;  // current |Q|

  // Structural self-checks; each violation becomes one message.  Empty means
  // every audited invariant holds: active = P + Q partition, incidence and
  // pair tables equal their from-scratch recomputations, the helper graph's
  // edge set matches the policy's rules exactly, |Q| <= q, high component
  // count * (delta+1) <= 2 * edge count, and (absent an override) the
  // degree-sensitive vertex classes match the base degrees.
  std::vector<std::string> audit() const;

  // Canonical text rendering of (active set, Q, component partition, pair
  // table, helper edge set); rebuild_phase twice must leave it unchanged.
  std::string canonical_state() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dyncon
