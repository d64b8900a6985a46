#pragma once

#include <cstdint>
#include <vector>

#include "dyncon/core.hpp"

namespace dyncon {

// Fully dynamic connectivity over an undirected multigraph, amortized
// polylogarithmic per operation.  Edges carry levels; the level-i forest
// spans the subgraph of edges with level >= i, each of whose components has
// at most n/2^i vertices.  Deleting a tree edge searches for a replacement
// bottom-up from the edge's level, promoting edges of the smaller side.
// Euler tours are stored in parent-pointer treaps whose priorities come from
// a splitmix64 stream, so runs are reproducible.
class DynForest {
 public:
  struct EdgeId {
    uint32_t slot = 0;
    uint32_t gen = 0;
    friend bool operator==(EdgeId a, EdgeId b) {
      return a.slot == b.slot && a.gen == b.gen;
    }
  };

  struct SplitReport {
    bool split = false;
    std::vector<VertexId> smaller;  // sorted ascending; empty if no split
  };

  struct ComponentHandle {
    const void* root = nullptr;  // identity token, valid until next mutation
    uint64_t version = 0;
    uint32_t size = 0;
    int64_t weight = 0;
    VertexId min_vid = 0;
    VertexId anchor = 0;
  };

  DynForest();
  ~DynForest();
  DynForest(const DynForest&) = delete;
  DynForest& operator=(const DynForest&) = delete;
  DynForest(DynForest&&) noexcept;
  DynForest& operator=(DynForest&&) noexcept;

  VertexId add_vertex(int64_t weight = 0);
  uint32_t n_vertices() const;

  // Inserts edge u-v.  Self-loops are accepted and inert.
  EdgeId link(VertexId u, VertexId v);

  // Removes the edge.  The report names the smaller resulting component
  // (ties by smaller minimum vertex id) when the deletion disconnects one.
  SplitReport cut(EdgeId e);
  // Same, without enumerating the smaller side.
  bool cut_quiet(EdgeId e);

  bool connected(VertexId u, VertexId v) const;
  bool edge_alive(EdgeId e) const;

  ComponentHandle component_of(VertexId v) const;
  static bool same_component(const ComponentHandle& a, const ComponentHandle& b);
  std::vector<VertexId> iter_component(VertexId v) const;  // sorted ascending

  void set_weight(VertexId v, int64_t w);
  int64_t weight_of(VertexId v) const;

  uint64_t version() const;
  // Treap restructuring steps (merge recursions and split ascents) so far.
  uint64_t rotations() const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace dyncon
