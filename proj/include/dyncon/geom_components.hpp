#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dyncon/box.hpp"
#include "dyncon/counters.hpp"
#include "dyncon/range_provider.hpp"

namespace dyncon {

// Intersection-graph components under block insertions and single deletions.
// Each inserted block builds a canonical collection over everything alive;
// every canonical subset that captured at least one new object becomes a path
// record: its members followed by its assignees, linked by forest edges.
// Deleting an object splices it out of each record it appears in (at most two
// cuts and one relink per record) and purges a record's remaining edges when
// either side dies out (its last assignee or its last member), so a record
// never spends more than twice its initial length in edge deletions.
class BlockState {
 public:
  BlockState(ProviderKind provider, Counters* counters);
  ~BlockState();
  BlockState(const BlockState&) = delete;
  BlockState& operator=(const BlockState&) = delete;

  struct DeleteReport {
    // Alive endpoints of every forest edge cut by this deletion, deduplicated
    // and sorted; every fragment of the old component contains one, because
    // each fragment lost at least one edge and kept that edge's inside end.
    std::vector<int64_t> former_neighbors;
  };

  // Objects must be valid, of uniform dimension, with ids distinct from each
  // other and from everything alive.
  void insert_block(const std::vector<GeomObject>& block);
  DeleteReport delete_object(int64_t id);

  bool connected(int64_t id1, int64_t id2) const;
  bool alive(int64_t id) const;
  uint32_t live_count() const;

  // Sorted components of sorted ids, ordered by first member.
  std::vector<std::vector<int64_t>> partition() const;
  std::vector<int64_t> component_members(int64_t id) const;
  uint32_t component_size(int64_t id) const;
  int64_t component_min_id(int64_t id) const;

  // Violations of the record accounting: alive-entry chain integrity,
  // assignee counts, and per-record deletions <= 2 * initial length.
  std::vector<std::string> audit() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dyncon
