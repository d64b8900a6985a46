#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dyncon/box.hpp"
#include "dyncon/rational.hpp"

namespace dyncon {

enum class ProviderKind { Boxes, Brute };

struct PartitionStats {
  uint64_t big_count = 0;     // subsets in the query answer larger than n/delta
  uint64_t small_total = 0;   // summed size of the others
  uint64_t subset_count = 0;  // total subsets in the answer
};

// A static collection of canonical subsets over a fixed object set: every
// intersection query decomposes into a disjoint union of canonical subsets
// whose union is exactly the set of stored objects intersecting the probe.
class CanonicalCollection {
 public:
  ~CanonicalCollection();
  CanonicalCollection(CanonicalCollection&&) noexcept;
  CanonicalCollection& operator=(CanonicalCollection&&) noexcept;

  // Subset ids index [0, subset_count()).
  std::vector<uint32_t> query(const GeomObject& probe) const;
  uint32_t subset_count() const;
  uint32_t subset_size(uint32_t sid) const;
  // Members as object ids, in the collection's storage order.
  std::vector<int64_t> subset_members(uint32_t sid) const;
  uint64_t total_size() const;  // sum of subset_size over all subsets
  uint32_t object_count() const;

  PartitionStats partition_stats(const GeomObject& probe, uint64_t delta) const;

  // Declared guarantees of the builder that produced this collection.
  Rational b() const;                       // query size exponent
  uint64_t total_size_bound() const;        // >= total_size()
  uint64_t query_count_bound() const;       // >= |query answer| for any probe

 private:
  friend CanonicalCollection build_collection(ProviderKind,
                                              const std::vector<GeomObject>&);
  struct Impl;
  std::unique_ptr<Impl> impl_;
  CanonicalCollection();
};

// Boxes: nested binary trees over each low endpoint then each high endpoint
// (2d levels), b = 1.  Brute: one singleton subset per object, b = 0.
// Objects must have distinct ids and uniform dimension.
CanonicalCollection build_collection(ProviderKind kind,
                                     const std::vector<GeomObject>& objects);

}  // namespace dyncon
