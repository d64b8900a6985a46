#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dyncon/box.hpp"
#include "dyncon/counters.hpp"
#include "dyncon/geom_components.hpp"
#include "dyncon/params.hpp"
#include "dyncon/range_provider.hpp"

namespace dyncon {

// Online geometric connectivity: objects arrive and leave one at a time,
// queries ask whether two live objects are linked by a chain of
// intersections.  Work proceeds in phases of y updates.  A phase freezes the
// current objects as X (components tracked by BlockState, canonical
// collection built once); newer arrivals Y ride a vertex-subgraph structure
// over a helper graph whose vertices are objects, X-components, and canonical
// subsets, with subsets activated exactly while they hold a live assignee.
class GeomState {
 public:
  GeomState(ProviderKind provider, Rational b, Counters* counters);
  ~GeomState();
  GeomState(const GeomState&) = delete;
  GeomState& operator=(const GeomState&) = delete;

  void insert(const GeomObject& obj);   // fresh id among the live set
  void delete_object(int64_t id);
  bool connected(int64_t id1, int64_t id2) const;

  bool alive(int64_t id) const;
  uint32_t live_count() const;
  uint64_t phase_y() const;      // current phase length
  uint64_t inner_delta() const;  // current inner threshold

  ExponentPair exponents() const;  // exponents_for_b(b)

  // Called after every BlockState mutation (phase build block, deletions),
  // with the BlockState in its settled state; used by tests to compare the
  // partition against the oracle.
  std::function<void(const BlockState&)> blocks_observer;

  // Inner structure audit plus geometric bookkeeping: subset activation
  // counts equal the live assignee counts, per-object edge budgets hold
  // (assignment edges within the declared query bound times y, direct pair
  // edges at most y^2).
  std::vector<std::string> audit() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dyncon
