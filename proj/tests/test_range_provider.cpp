#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "dyncon/range_provider.hpp"
#include "dyncon/rng.hpp"

using namespace dyncon;

namespace {

GeomObject box1(int64_t id, int64_t lo, int64_t hi) {
  return GeomObject{id, {lo}, {hi}};
}

GeomObject box2(int64_t id, int64_t lx, int64_t hx, int64_t ly, int64_t hy) {
  return GeomObject{id, {lx, ly}, {hx, hy}};
}

GeomObject random_box(SplitMix64& rng, int64_t next_id, int d, int64_t span) {
  GeomObject o;
  o.id = next_id;
  for (int k = 0; k < d; ++k) {
    int64_t a = rng.range(0, span);
    int64_t b = a + rng.range(0, span / 4 + 1);
    o.lo.push_back(a);
    o.hi.push_back(b);
  }
  return o;
}

// Flattens a query answer to sorted member ids, failing on any duplicate:
// the canonical subsets of one answer must be pairwise disjoint.
std::vector<int64_t> answer_ids(const CanonicalCollection& c,
                                const GeomObject& probe) {
  std::vector<int64_t> ids;
  for (uint32_t sid : c.query(probe)) {
    CHECK(c.subset_size(sid) > 0);
    for (int64_t id : c.subset_members(sid)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
  return ids;
}

std::vector<int64_t> brute_ids(const std::vector<GeomObject>& objs,
                               const GeomObject& probe) {
  std::vector<int64_t> ids;
  for (const auto& o : objs)
    if (intersects(o, probe)) ids.push_back(o.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

TEST_SUITE("range_provider") {

TEST_CASE("brute provider is one singleton per object") {
  std::vector<GeomObject> objs = {box1(7, 0, 2), box1(3, 1, 3), box1(9, 5, 6),
                                  box1(4, 10, 12)};
  auto c = build_collection(ProviderKind::Brute, objs);
  CHECK(c.object_count() == 4);
  CHECK(c.subset_count() == 4);
  CHECK(c.total_size() == 4);
  CHECK(c.b() == Rational(0));
  CHECK(c.total_size_bound() == 4);
  CHECK(c.query_count_bound() == 4);
  for (uint32_t sid = 0; sid < 4; ++sid) {
    CHECK(c.subset_size(sid) == 1);
    CHECK(c.subset_members(sid) == std::vector<int64_t>{objs[sid].id});
  }
  // [2, 5] touches [0,2], [1,3], [5,6] but not [10,12].
  CHECK(c.query(box1(-1, 2, 5)) == std::vector<uint32_t>{0, 1, 2});
  CHECK(c.query(box1(-1, 13, 20)).empty());
}

TEST_CASE("boxes provider covers hand-checked interval queries") {
  std::vector<GeomObject> objs = {box1(10, 0, 2), box1(20, 1, 3),
                                  box1(30, 5, 6)};
  auto c = build_collection(ProviderKind::Boxes, objs);
  CHECK(c.object_count() == 3);
  CHECK(c.b() == Rational(1));
  CHECK(answer_ids(c, box1(-1, 2, 5)) == std::vector<int64_t>{10, 20, 30});
  CHECK(answer_ids(c, box1(-1, 3, 3)) == std::vector<int64_t>{20});
  CHECK(answer_ids(c, box1(-1, 4, 4)).empty());
  CHECK(answer_ids(c, box1(-1, 7, 9)).empty());
  CHECK(answer_ids(c, box1(-1, -5, 100)) == std::vector<int64_t>{10, 20, 30});
}

TEST_CASE("boxes provider covers a hand-checked planar query") {
  std::vector<GeomObject> objs = {box2(1, 0, 4, 0, 4), box2(2, 3, 6, 3, 6),
                                  box2(3, 5, 8, 0, 1), box2(4, 9, 9, 9, 9)};
  auto c = build_collection(ProviderKind::Boxes, objs);
  // Overlaps in x alone are not enough; both axes must meet.
  CHECK(answer_ids(c, box2(-1, 4, 5, 0, 0)) ==
        std::vector<int64_t>{1, 3});
  CHECK(answer_ids(c, box2(-1, 4, 4, 4, 4)) == std::vector<int64_t>{1, 2});
  CHECK(answer_ids(c, box2(-1, 0, 9, 0, 9)) ==
        std::vector<int64_t>{1, 2, 3, 4});
  CHECK(answer_ids(c, box2(-1, 7, 8, 3, 8)).empty());
}

TEST_CASE("query answers partition the intersecting set") {
  SplitMix64 rng(501);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + static_cast<int>(rng.below(2));
    int n = 1 + static_cast<int>(rng.below(60));
    int64_t span = 40;
    std::vector<GeomObject> objs;
    for (int i = 0; i < n; ++i)
      objs.push_back(random_box(rng, 100 + i, d, span));
    for (ProviderKind kind : {ProviderKind::Boxes, ProviderKind::Brute}) {
      auto c = build_collection(kind, objs);
      for (int p = 0; p < 25; ++p) {
        GeomObject probe = random_box(rng, -1, d, span);
        CHECK(answer_ids(c, probe) == brute_ids(objs, probe));
        CHECK(c.query(probe).size() <= c.query_count_bound());
      }
    }
  }
}

TEST_CASE("declared bounds and sizes are consistent") {
  SplitMix64 rng(502);
  for (int trial = 0; trial < 12; ++trial) {
    int d = 1 + static_cast<int>(rng.below(2));
    int n = 1 + static_cast<int>(rng.below(80));
    std::vector<GeomObject> objs;
    for (int i = 0; i < n; ++i) objs.push_back(random_box(rng, i, d, 50));
    for (ProviderKind kind : {ProviderKind::Boxes, ProviderKind::Brute}) {
      auto c = build_collection(kind, objs);
      uint64_t sum = 0;
      std::set<int64_t> seen;
      for (uint32_t sid = 0; sid < c.subset_count(); ++sid) {
        auto mem = c.subset_members(sid);
        CHECK(mem.size() == c.subset_size(sid));
        sum += mem.size();
        for (int64_t id : mem) seen.insert(id);
      }
      CHECK(sum == c.total_size());
      CHECK(c.total_size() <= c.total_size_bound());
      // Every object appears in at least one subset (its own leaf).
      CHECK(seen.size() == static_cast<size_t>(n));
    }
  }
}

TEST_CASE("partition stats mirror the big-small split of an answer") {
  SplitMix64 rng(503);
  std::vector<GeomObject> objs;
  for (int i = 0; i < 48; ++i) objs.push_back(random_box(rng, i, 2, 30));
  for (ProviderKind kind : {ProviderKind::Boxes, ProviderKind::Brute}) {
    auto c = build_collection(kind, objs);
    uint64_t n = c.object_count();
    for (int p = 0; p < 30; ++p) {
      GeomObject probe = random_box(rng, -1, 2, 30);
      for (uint64_t delta : {1ull, 3ull, 8ull, 100ull}) {
        auto st = c.partition_stats(probe, delta);
        uint64_t big = 0, small = 0, cnt = 0;
        for (uint32_t sid : c.query(probe)) {
          ++cnt;
          uint64_t sz = c.subset_size(sid);
          if (sz * delta > n)
            ++big;
          else
            small += sz;
        }
        CHECK(st.subset_count == cnt);
        CHECK(st.big_count == big);
        CHECK(st.small_total == small);
      }
    }
  }
}

TEST_CASE("empty and singleton collections") {
  for (ProviderKind kind : {ProviderKind::Boxes, ProviderKind::Brute}) {
    auto c = build_collection(kind, {});
    CHECK(c.object_count() == 0);
    CHECK(c.subset_count() == 0);
    CHECK(c.total_size() == 0);
    CHECK(c.query(box1(-1, 0, 1)).empty());

    auto s = build_collection(kind, {box2(5, 1, 2, 3, 4)});
    CHECK(s.object_count() == 1);
    CHECK(s.total_size() >= 1);
    CHECK(answer_ids(s, box2(-1, 2, 2, 3, 3)) == std::vector<int64_t>{5});
    CHECK(answer_ids(s, box2(-1, 3, 4, 3, 3)).empty());
  }
}

}  // TEST_SUITE
