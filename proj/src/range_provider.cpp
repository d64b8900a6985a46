#include "dyncon/range_provider.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <unordered_set>
#include <vector>

namespace dyncon {

namespace {

uint64_t ceil_log2(uint64_t x) {
  uint64_t l = 0;
  while ((1ull << l) < x) ++l;
  return l;
}

uint64_t sat_mul(uint64_t a, uint64_t b) {
  if (b != 0 && a > UINT64_MAX / b) return UINT64_MAX;
  return a * b;
}

}  // namespace

// Nested prefix/suffix range trees.  Levels 1..d sort by the low endpoint of
// one axis (a box intersects the probe only if lo <= probe.hi, a prefix of
// the sorted order); levels d+1..2d sort by the high endpoint (hi >= probe.lo,
// a suffix).  Every tree node of a non-final level owns a child tree over its
// elements; the nodes of final-level trees are the canonical subsets, kept as
// slices of their tree's sorted array rather than materialized lists.
struct CanonicalCollection::Impl {
  ProviderKind kind = ProviderKind::Brute;
  std::vector<GeomObject> objs;
  uint32_t d = 0;

  struct Node {
    uint32_t l = 0, r = 0;
    int32_t left = -1, right = -1;
    uint32_t child = 0;  // child tree, or subset id at the final level
  };
  struct Tree {
    uint32_t level = 0;
    std::vector<int64_t> keys;
    std::vector<uint32_t> items;  // indices into objs
    std::vector<Node> nodes;      // nodes[0] is the root
  };
  struct Subset {
    uint32_t tree = 0;
    uint32_t l = 0, r = 0;
  };
  std::vector<Tree> trees;
  std::vector<Subset> subsets;
  uint64_t total = 0;

  int64_t key_of(uint32_t obj, uint32_t level) const {
    uint32_t axis = (level - 1) % d;
    return level <= d ? objs[obj].lo[axis] : objs[obj].hi[axis];
  }

  uint32_t build_tree(uint32_t level, std::vector<uint32_t> item_idxs) {
    uint32_t tid = static_cast<uint32_t>(trees.size());
    trees.emplace_back();
    Tree t;
    t.level = level;
    std::sort(item_idxs.begin(), item_idxs.end(),
              [&](uint32_t a, uint32_t b) {
                int64_t ka = key_of(a, level), kb = key_of(b, level);
                if (ka != kb) return ka < kb;
                return objs[a].id < objs[b].id;
              });
    t.keys.reserve(item_idxs.size());
    for (uint32_t i : item_idxs) t.keys.push_back(key_of(i, level));
    t.items = std::move(item_idxs);
    build_nodes(t, tid, 0, static_cast<uint32_t>(t.items.size()), level);
    trees[tid] = std::move(t);
    return tid;
  }

  int32_t build_nodes(Tree& t, uint32_t tid, uint32_t l, uint32_t r,
                      uint32_t level) {
    if (l >= r) return -1;
    int32_t nid = static_cast<int32_t>(t.nodes.size());
    t.nodes.push_back({l, r, -1, -1, 0});
    if (level == 2 * d) {
      uint32_t sid = static_cast<uint32_t>(subsets.size());
      subsets.push_back({tid, l, r});
      total += r - l;
      t.nodes[nid].child = sid;
    } else {
      std::vector<uint32_t> sub(t.items.begin() + l, t.items.begin() + r);
      uint32_t child = build_tree(level + 1, std::move(sub));
      t.nodes[nid].child = child;
    }
    if (r - l > 1) {
      uint32_t m = l + (r - l) / 2;
      int32_t lc = build_nodes(t, tid, l, m, level);
      int32_t rc = build_nodes(t, tid, m, r, level);
      t.nodes[nid].left = lc;
      t.nodes[nid].right = rc;
    }
    return nid;
  }

  void query_tree(uint32_t tid, const GeomObject& probe,
                  std::vector<uint32_t>& out) const {
    const Tree& t = trees[tid];
    if (t.items.empty()) return;
    uint32_t axis = (t.level - 1) % d;
    uint32_t lo, hi;
    if (t.level <= d) {
      lo = 0;
      hi = static_cast<uint32_t>(
          std::upper_bound(t.keys.begin(), t.keys.end(), probe.hi[axis]) -
          t.keys.begin());
    } else {
      lo = static_cast<uint32_t>(
          std::lower_bound(t.keys.begin(), t.keys.end(), probe.lo[axis]) -
          t.keys.begin());
      hi = static_cast<uint32_t>(t.keys.size());
    }
    if (lo >= hi) return;
    query_node(t, 0, lo, hi, probe, out);
  }

  void query_node(const Tree& t, int32_t nid, uint32_t lo, uint32_t hi,
                  const GeomObject& probe, std::vector<uint32_t>& out) const {
    const Node& nd = t.nodes[nid];
    if (nd.l >= hi || nd.r <= lo) return;
    if (lo <= nd.l && nd.r <= hi) {
      if (t.level == 2 * d)
        out.push_back(nd.child);
      else
        query_tree(nd.child, probe, out);
      return;
    }
    assert(nd.left >= 0 && nd.right >= 0);
    query_node(t, nd.left, lo, hi, probe, out);
    query_node(t, nd.right, lo, hi, probe, out);
  }
};

CanonicalCollection::CanonicalCollection() : impl_(new Impl) {}
CanonicalCollection::~CanonicalCollection() = default;
CanonicalCollection::CanonicalCollection(CanonicalCollection&&) noexcept =
    default;
CanonicalCollection& CanonicalCollection::operator=(
    CanonicalCollection&&) noexcept = default;

std::vector<uint32_t> CanonicalCollection::query(
    const GeomObject& probe) const {
  const Impl& im = *impl_;
  std::vector<uint32_t> out;
  if (im.objs.empty()) return out;
  assert(static_cast<uint32_t>(probe.dim()) == im.d);
  if (im.kind == ProviderKind::Brute) {
    for (uint32_t i = 0; i < im.objs.size(); ++i)
      if (intersects(im.objs[i], probe)) out.push_back(i);
    return out;
  }
  im.query_tree(0, probe, out);
  return out;
}

uint32_t CanonicalCollection::subset_count() const {
  const Impl& im = *impl_;
  if (im.kind == ProviderKind::Brute)
    return static_cast<uint32_t>(im.objs.size());
  return static_cast<uint32_t>(im.subsets.size());
}

uint32_t CanonicalCollection::subset_size(uint32_t sid) const {
  const Impl& im = *impl_;
  if (im.kind == ProviderKind::Brute) {
    assert(sid < im.objs.size());
    return 1;
  }
  assert(sid < im.subsets.size());
  return im.subsets[sid].r - im.subsets[sid].l;
}

std::vector<int64_t> CanonicalCollection::subset_members(uint32_t sid) const {
  const Impl& im = *impl_;
  std::vector<int64_t> out;
  if (im.kind == ProviderKind::Brute) {
    assert(sid < im.objs.size());
    out.push_back(im.objs[sid].id);
    return out;
  }
  assert(sid < im.subsets.size());
  const Impl::Subset& s = im.subsets[sid];
  const Impl::Tree& t = im.trees[s.tree];
  for (uint32_t i = s.l; i < s.r; ++i) out.push_back(im.objs[t.items[i]].id);
  return out;
}

uint64_t CanonicalCollection::total_size() const {
  const Impl& im = *impl_;
  if (im.kind == ProviderKind::Brute) return im.objs.size();
  return im.total;
}

uint32_t CanonicalCollection::object_count() const {
  return static_cast<uint32_t>(impl_->objs.size());
}

PartitionStats CanonicalCollection::partition_stats(const GeomObject& probe,
                                                    uint64_t delta) const {
  PartitionStats st;
  uint64_t n = impl_->objs.size();
  for (uint32_t sid : query(probe)) {
    uint64_t sz = subset_size(sid);
    ++st.subset_count;
    if (sz * delta > n)
      ++st.big_count;
    else
      st.small_total += sz;
  }
  return st;
}

Rational CanonicalCollection::b() const {
  return impl_->kind == ProviderKind::Boxes ? Rational(1) : Rational(0);
}

uint64_t CanonicalCollection::total_size_bound() const {
  const Impl& im = *impl_;
  uint64_t n = im.objs.size();
  if (im.kind == ProviderKind::Brute) return n;
  return sat_mul(n, query_count_bound());
}

uint64_t CanonicalCollection::query_count_bound() const {
  const Impl& im = *impl_;
  uint64_t n = im.objs.size();
  if (im.kind == ProviderKind::Brute) return n;
  uint64_t base = 2 * ceil_log2(n ? n : 1) + 2;
  uint64_t out = 1;
  for (uint32_t i = 0; i < 2 * im.d; ++i) out = sat_mul(out, base);
  return out;
}

CanonicalCollection build_collection(ProviderKind kind,
                                     const std::vector<GeomObject>& objects) {
  CanonicalCollection c;
  CanonicalCollection::Impl& im = *c.impl_;
  im.kind = kind;
  im.objs = objects;
  if (!objects.empty()) {
    im.d = static_cast<uint32_t>(objects.front().dim());
#ifndef NDEBUG
    std::unordered_set<int64_t> ids;
    for (const auto& o : objects) {
      assert(o.valid() && static_cast<uint32_t>(o.dim()) == im.d);
      assert(ids.insert(o.id).second);
    }
#endif
    if (kind == ProviderKind::Boxes) {
      std::vector<uint32_t> all(objects.size());
      for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
      im.build_tree(1, std::move(all));
    }
  }
  return c;
}

}  // namespace dyncon
