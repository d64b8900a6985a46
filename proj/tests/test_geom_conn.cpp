#include <algorithm>
#include <vector>

#include "doctest.h"
#include "dyncon/counters.hpp"
#include "dyncon/geom_conn.hpp"
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

void check_clean(const GeomState& gs) {
  auto bad = gs.audit();
  for (const auto& v : bad) {
    CAPTURE(v);
    CHECK(false);
  }
  CHECK(bad.empty());
}

}  // namespace

TEST_SUITE("geom_conn") {

TEST_CASE("exponents and phase parameters are exposed") {
  Counters cnt;
  GeomState gs(ProviderKind::Boxes, Rational(1), &cnt);
  CHECK(gs.exponents().update == Rational(2, 3));
  CHECK(gs.exponents().query == Rational(1, 3));
  CHECK(gs.phase_y() >= 1);
  CHECK(gs.inner_delta() >= 1);
  CHECK(gs.live_count() == 0);
  GeomState gh(ProviderKind::Brute, Rational(1, 2), &cnt);
  CHECK(gh.exponents().update == Rational(9, 10));
  CHECK(gh.exponents().query == Rational(1, 5));
}

TEST_CASE("arrivals connect through overlaps and split on deletion") {
  Counters cnt;
  GeomState gs(ProviderKind::Boxes, Rational(1), &cnt);
  gs.insert(box1(1, 0, 2));
  CHECK(gs.live_count() == 1);
  CHECK(gs.connected(1, 1));
  gs.insert(box1(2, 1, 3));
  CHECK(gs.connected(1, 2));
  gs.insert(box1(3, 10, 11));
  CHECK_FALSE(gs.connected(1, 3));
  CHECK_FALSE(gs.connected(2, 3));
  check_clean(gs);

  gs.insert(box1(4, 3, 10));  // bridges 2 and 3
  CHECK(gs.connected(1, 3));
  check_clean(gs);
  gs.delete_object(4);
  CHECK_FALSE(gs.connected(1, 3));
  CHECK(gs.connected(1, 2));
  CHECK(gs.alive(2));
  CHECK_FALSE(gs.alive(4));
  check_clean(gs);
}

TEST_CASE("deleting inside the frozen set regroups its components") {
  // With b = 1 the first phases are short, so early arrivals freeze quickly;
  // after the chain is frozen, deleting its middle is a frozen-set deletion
  // that must split the component in two.
  Counters cnt;
  GeomState gs(ProviderKind::Boxes, Rational(1), &cnt);
  for (int i = 1; i <= 5; ++i) gs.insert(box1(i, 2 * i, 2 * i + 2));
  for (int i = 1; i < 5; ++i) CHECK(gs.connected(i, i + 1));
  CHECK(gs.connected(1, 5));
  uint64_t splits_before = cnt.component_splits;
  gs.delete_object(3);
  CHECK(gs.connected(1, 2));
  CHECK(gs.connected(4, 5));
  CHECK_FALSE(gs.connected(2, 4));
  CHECK(cnt.component_splits > splits_before);
  check_clean(gs);
}

TEST_CASE("observer sees settled block partitions") {
  Counters cnt;
  GeomState gs(ProviderKind::Boxes, Rational(1), &cnt);
  std::vector<GeomObject> pool;
  int observed = 0;
  gs.blocks_observer = [&](const BlockState& bs) {
    ++observed;
    std::vector<GeomObject> frozen;
    for (const auto& o : pool)
      if (bs.alive(o.id)) frozen.push_back(o);
    CHECK(bs.partition() == oracle_components_geom(frozen));
  };
  SplitMix64 rng(77);
  std::vector<int64_t> alive_ids;
  for (int step = 0; step < 60; ++step) {
    if (alive_ids.empty() || rng.below(3) != 0) {
      int64_t id = step + 1;
      GeomObject o = random_box(rng, id, 1, 24);
      pool.push_back(o);
      alive_ids.push_back(id);
      gs.insert(o);
    } else {
      size_t pick = rng.below(alive_ids.size());
      gs.delete_object(alive_ids[pick]);
      alive_ids.erase(alive_ids.begin() + pick);
    }
  }
  CHECK(observed > 0);
}

TEST_CASE("answers match the oracle under mixed churn") {
  SplitMix64 rng(911);
  for (int d : {1, 2}) {
    for (ProviderKind kind : {ProviderKind::Boxes, ProviderKind::Brute}) {
      for (Rational b : {Rational(1), Rational(1, 2)}) {
        Counters cnt;
        GeomState gs(kind, b, &cnt);
        std::vector<GeomObject> alive;
        int64_t next_id = 1;
        for (int step = 0; step < 150; ++step) {
          uint64_t roll = rng.below(100);
          if (alive.empty() || roll < 45) {
            GeomObject o = random_box(rng, next_id++, d, 28);
            gs.insert(o);
            alive.push_back(o);
          } else if (roll < 75) {
            size_t pick = rng.below(alive.size());
            gs.delete_object(alive[pick].id);
            alive.erase(alive.begin() + pick);
          } else {
            const auto& u = alive[rng.below(alive.size())];
            const auto& v = alive[rng.below(alive.size())];
            CHECK(gs.connected(u.id, v.id) ==
                  oracle_connected_geom(alive, u.id, v.id));
          }
          CHECK(gs.live_count() == alive.size());
          if (step % 25 == 24) {
            for (size_t i = 0; i < alive.size(); ++i)
              for (size_t j = i; j < alive.size(); ++j)
                CHECK(gs.connected(alive[i].id, alive[j].id) ==
                      oracle_connected_geom(alive, alive[i].id, alive[j].id));
            auto bad = gs.audit();
            CHECK(bad.empty());
            if (!bad.empty()) {
              for (const auto& v : bad) {
                CAPTURE(v);
                CHECK(false);
              }
              return;
            }
          }
        }
      }
    }
  }
}

TEST_CASE("emptying and refilling the structure") {
  Counters cnt;
  GeomState gs(ProviderKind::Brute, Rational(1), &cnt);
  gs.insert(box1(1, 0, 1));
  gs.insert(box1(2, 1, 2));
  gs.delete_object(1);
  gs.delete_object(2);
  CHECK(gs.live_count() == 0);
  gs.insert(box1(1, 5, 6));  // dead id fresh again
  CHECK(gs.alive(1));
  CHECK(gs.connected(1, 1));
  check_clean(gs);
}

}  // TEST_SUITE
