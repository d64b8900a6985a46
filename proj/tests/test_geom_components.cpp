#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "dyncon/counters.hpp"
#include "dyncon/geom_components.hpp"
#include "dyncon/oracle.hpp"
#include "dyncon/rng.hpp"

using namespace dyncon;

namespace {

GeomObject box1(int64_t id, int64_t lo, int64_t hi) {
  return GeomObject{id, {lo}, {hi}};
}

GeomObject random_box(SplitMix64& rng, int64_t id, int d, int64_t span) {
  GeomObject o;
  o.id = id;
  for (int k = 0; k < d; ++k) {
    int64_t a = rng.range(0, span);
    int64_t b = a + rng.range(0, span / 5 + 1);
    o.lo.push_back(a);
    o.hi.push_back(b);
  }
  return o;
}

void check_clean(const BlockState& bs) {
  auto bad = bs.audit();
  for (const auto& v : bad) {
    CAPTURE(v);
    CHECK(false);
  }
  CHECK(bad.empty());
}

}  // namespace

TEST_SUITE("geom_components") {

TEST_CASE("single block forms intersection components") {
  Counters cnt;
  BlockState bs(ProviderKind::Boxes, &cnt);
  bs.insert_block({box1(1, 0, 1), box1(2, 1, 2), box1(3, 5, 6), box1(4, 6, 7),
                   box1(5, 10, 10)});
  CHECK(bs.live_count() == 5);
  CHECK(bs.alive(3));
  CHECK_FALSE(bs.alive(99));
  CHECK(bs.connected(1, 2));
  CHECK(bs.connected(3, 4));
  CHECK_FALSE(bs.connected(2, 3));
  CHECK_FALSE(bs.connected(1, 5));
  CHECK(bs.connected(5, 5));
  CHECK(bs.partition() ==
        std::vector<std::vector<int64_t>>{{1, 2}, {3, 4}, {5}});
  CHECK(bs.component_members(2) == std::vector<int64_t>{1, 2});
  CHECK(bs.component_size(4) == 2);
  CHECK(bs.component_min_id(4) == 3);
  CHECK(bs.component_min_id(5) == 5);
  CHECK(cnt.gstar_edge_updates > 0);
  check_clean(bs);
}

TEST_CASE("bridging block merges and its deletion resplits") {
  Counters cnt;
  BlockState bs(ProviderKind::Boxes, &cnt);
  bs.insert_block({box1(1, 0, 1), box1(2, 1, 2), box1(3, 5, 6), box1(4, 6, 7),
                   box1(5, 10, 10)});
  bs.insert_block({box1(6, 2, 5)});
  CHECK(bs.partition() ==
        std::vector<std::vector<int64_t>>{{1, 2, 3, 4, 6}, {5}});
  CHECK(bs.connected(1, 4));
  check_clean(bs);

  auto before = bs.component_members(6);
  auto rep = bs.delete_object(6);
  CHECK_FALSE(bs.alive(6));
  CHECK(bs.live_count() == 5);
  CHECK(bs.partition() ==
        std::vector<std::vector<int64_t>>{{1, 2}, {3, 4}, {5}});
  check_clean(bs);

  // Every fragment of the old component keeps a reported neighbor.
  std::set<int64_t> fns(rep.former_neighbors.begin(),
                        rep.former_neighbors.end());
  CHECK_FALSE(fns.empty());
  CHECK(fns.count(6) == 0);
  std::set<int64_t> fragment_keys;
  for (int64_t id : before)
    if (id != 6) fragment_keys.insert(bs.component_min_id(id));
  for (int64_t key : fragment_keys) {
    bool hit = false;
    for (int64_t fn : fns)
      if (bs.alive(fn) && bs.component_min_id(fn) == key) hit = true;
    CHECK(hit);
  }
}

TEST_CASE("deleting a hub reports a neighbor in every fragment") {
  Counters cnt;
  BlockState bs(ProviderKind::Brute, &cnt);
  bs.insert_block({box1(50, 0, 10), box1(51, 0, 0), box1(52, 2, 2),
                   box1(53, 4, 4), box1(54, 6, 6)});
  CHECK(bs.partition() ==
        std::vector<std::vector<int64_t>>{{50, 51, 52, 53, 54}});
  auto rep = bs.delete_object(50);
  std::set<int64_t> fns(rep.former_neighbors.begin(),
                        rep.former_neighbors.end());
  // Four singleton fragments remain; each must appear in the report.
  CHECK(bs.partition() ==
        std::vector<std::vector<int64_t>>{{51}, {52}, {53}, {54}});
  for (int64_t id : {51, 52, 53, 54}) CHECK(fns.count(id) == 1);
  check_clean(bs);
}

TEST_CASE("partition tracks the brute intersection graph under churn") {
  SplitMix64 rng(904);
  for (int d : {1, 2}) {
    for (ProviderKind kind : {ProviderKind::Boxes, ProviderKind::Brute}) {
      Counters cnt;
      BlockState bs(kind, &cnt);
      std::vector<GeomObject> alive;
      std::vector<int64_t> dead_ids;
      int64_t next_id = 1;
      for (int step = 0; step < 120; ++step) {
        if (alive.empty() || rng.below(5) < 3) {
          int bl = 1 + static_cast<int>(rng.below(4));
          std::vector<GeomObject> block;
          for (int i = 0; i < bl; ++i) {
            int64_t id;
            if (!dead_ids.empty() && rng.below(5) == 0) {
              id = dead_ids.back();
              dead_ids.pop_back();
            } else {
              id = next_id++;
            }
            block.push_back(random_box(rng, id, d, 30));
          }
          bs.insert_block(block);
          for (auto& o : block) alive.push_back(o);
        } else {
          size_t pick = rng.below(alive.size());
          int64_t id = alive[pick].id;
          auto before = bs.component_members(id);
          auto rep = bs.delete_object(id);
          alive.erase(alive.begin() + pick);
          dead_ids.push_back(id);
          // Each fragment of the old component holds a former neighbor.
          std::set<int64_t> keys;
          for (int64_t m : before)
            if (m != id) keys.insert(bs.component_min_id(m));
          for (int64_t key : keys) {
            bool hit = false;
            for (int64_t fn : rep.former_neighbors)
              if (bs.alive(fn) && bs.component_min_id(fn) == key) hit = true;
            CHECK(hit);
          }
        }
        CHECK(bs.live_count() == alive.size());
        CHECK(bs.partition() == oracle_components_geom(alive));
        if (!alive.empty()) {
          const auto& a = alive[rng.below(alive.size())];
          const auto& b = alive[rng.below(alive.size())];
          CHECK(bs.connected(a.id, b.id) ==
                oracle_connected_geom(alive, a.id, b.id));
        }
        auto bad = bs.audit();
        CHECK(bad.empty());
        if (!bad.empty()) return;
      }
    }
  }
}

TEST_CASE("records survive deletion to exhaustion") {
  SplitMix64 rng(905);
  Counters cnt;
  BlockState bs(ProviderKind::Boxes, &cnt);
  std::vector<int64_t> ids;
  for (int b = 0; b < 4; ++b) {
    std::vector<GeomObject> block;
    for (int i = 0; i < 6; ++i) {
      int64_t id = static_cast<int64_t>(ids.size()) + 1;
      block.push_back(random_box(rng, id, 2, 12));
      ids.push_back(id);
    }
    bs.insert_block(block);
    check_clean(bs);
  }
  while (!ids.empty()) {
    size_t pick = rng.below(ids.size());
    bs.delete_object(ids[pick]);
    ids.erase(ids.begin() + pick);
    check_clean(bs);
  }
  CHECK(bs.live_count() == 0);
  CHECK(bs.partition().empty());
}

}  // TEST_SUITE
