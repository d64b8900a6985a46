#include "dyncon/geom_components.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "dyncon/dyn_forest.hpp"

namespace dyncon {

// A record is the doubly linked chain of its alive entries; the forest edge
// from an entry to its successor is stored on the left entry.  Splicing an
// entry cuts at most two edges and adds at most one, and the record's final
// purge cuts whatever remains, so total cuts stay below twice the initial
// entry count (the chain starts with len-1 edges and gains at most one per
// splice).  A record's edges are justified only while it keeps at least one
// alive member and one alive assignee (members pairwise connect through any
// assignee and vice versa), so the purge fires when either count hits zero.
struct BlockState::Impl {
  ProviderKind kind;
  Counters* cnt = nullptr;
  DynForest h;

  struct Entry {
    uint32_t slot = 0;
    bool assignee = false;
    bool alive = true;
    bool has_edge = false;  // edge to the next alive entry
    int32_t prev = -1, next = -1;
    DynForest::EdgeId edge;
  };
  struct Rec {
    std::vector<Entry> ents;
    int32_t head = -1;
    uint32_t initial_len = 0;
    uint32_t assigned_alive = 0;
    uint32_t members_alive = 0;
    uint64_t deletions = 0;  // forest cuts charged to this record
    bool alive = true;
  };

  std::vector<GeomObject> slot_obj;  // by slot, kept after death
  std::vector<char> slot_alive;
  std::unordered_map<int64_t, uint32_t> id_slot;  // alive ids only
  std::vector<Rec> recs;
  // slot -> (record, entry index) incidences, cleared on death
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> incid;
  int dim = 0;

  // Deletion in progress: cut-edge endpoints flow into this sink, skipping
  // the object being deleted.
  std::set<int64_t>* fn_sink = nullptr;
  uint32_t fn_skip = UINT32_MAX;

  DynForest::EdgeId hlink(VertexId u, VertexId v) {
    if (cnt) ++cnt->gstar_edge_updates;
    return h.link(u, v);
  }
  void hcut(DynForest::EdgeId e, uint32_t s1, uint32_t s2) {
    if (cnt) ++cnt->gstar_edge_updates;
    h.cut_quiet(e);
    if (fn_sink) {
      for (uint32_t s : {s1, s2})
        if (s != fn_skip && slot_alive[s]) fn_sink->insert(slot_obj[s].id);
    }
  }

  void purge(Rec& r) {
    for (int32_t i = r.head; i != -1; i = r.ents[i].next) {
      Entry& e = r.ents[i];
      if (e.has_edge) {
        assert(e.next != -1);
        hcut(e.edge, e.slot, r.ents[e.next].slot);
        e.has_edge = false;
        ++r.deletions;
      }
    }
    r.alive = false;
  }

  void splice(Rec& r, uint32_t ei) {
    Entry& e = r.ents[ei];
    assert(e.alive);
    int32_t p = e.prev, nx = e.next;
    if (p != -1 && r.ents[p].has_edge) {
      hcut(r.ents[p].edge, r.ents[p].slot, e.slot);
      r.ents[p].has_edge = false;
      ++r.deletions;
    }
    if (e.has_edge) {
      assert(nx != -1);
      hcut(e.edge, e.slot, r.ents[nx].slot);
      e.has_edge = false;
      ++r.deletions;
    }
    if (p != -1)
      r.ents[p].next = nx;
    else
      r.head = nx;
    if (nx != -1) r.ents[nx].prev = p;
    if (p != -1 && nx != -1) {
      r.ents[p].edge = hlink(r.ents[p].slot, r.ents[nx].slot);
      r.ents[p].has_edge = true;
    }
    e.alive = false;
    e.prev = e.next = -1;
    if (e.assignee) {
      assert(r.assigned_alive > 0);
      --r.assigned_alive;
    } else {
      assert(r.members_alive > 0);
      --r.members_alive;
    }
    if (r.assigned_alive == 0 || r.members_alive == 0) purge(r);
  }
};

BlockState::BlockState(ProviderKind provider, Counters* counters)
    : impl_(new Impl) {
  impl_->kind = provider;
  impl_->cnt = counters;
}

BlockState::~BlockState() = default;

void BlockState::insert_block(const std::vector<GeomObject>& block) {
  Impl& im = *impl_;
  if (block.empty()) return;
  std::vector<uint32_t> zslots;
  zslots.reserve(block.size());
  for (const GeomObject& z : block) {
    assert(z.valid());
    if (im.dim == 0)
      im.dim = z.dim();
    else
      assert(z.dim() == im.dim);
    assert(im.id_slot.find(z.id) == im.id_slot.end());
    uint32_t s = static_cast<uint32_t>(im.slot_obj.size());
    im.slot_obj.push_back(z);
    im.slot_alive.push_back(1);
    im.incid.emplace_back();
    im.id_slot.emplace(z.id, s);
    VertexId hv = im.h.add_vertex(1);
    assert(hv == s);
    (void)hv;
    zslots.push_back(s);
  }

  std::vector<GeomObject> live;
  for (uint32_t s = 0; s < im.slot_obj.size(); ++s)
    if (im.slot_alive[s]) live.push_back(im.slot_obj[s]);
  CanonicalCollection coll = build_collection(im.kind, live);

  // Assignees per canonical subset, in block scan order.
  std::map<uint32_t, std::vector<uint32_t>> assign;
  for (uint32_t zs : zslots)
    for (uint32_t sid : coll.query(im.slot_obj[zs])) assign[sid].push_back(zs);

  for (const auto& [sid, assignees] : assign) {
    Impl::Rec r;
    for (int64_t mid : coll.subset_members(sid)) {
      auto it = im.id_slot.find(mid);
      assert(it != im.id_slot.end());
      r.ents.push_back({it->second, false, true, false, -1, -1, {}});
    }
    for (uint32_t zs : assignees)
      r.ents.push_back({zs, true, true, false, -1, -1, {}});
    uint32_t len = static_cast<uint32_t>(r.ents.size());
    r.initial_len = len;
    r.assigned_alive = static_cast<uint32_t>(assignees.size());
    r.members_alive = len - r.assigned_alive;
    assert(r.members_alive > 0);
    r.head = 0;
    for (uint32_t i = 0; i < len; ++i) {
      r.ents[i].prev = i == 0 ? -1 : static_cast<int32_t>(i - 1);
      r.ents[i].next = i + 1 == len ? -1 : static_cast<int32_t>(i + 1);
      if (i + 1 < len) {
        r.ents[i].edge = im.hlink(r.ents[i].slot, r.ents[i + 1].slot);
        r.ents[i].has_edge = true;
      }
    }
    uint32_t rid = static_cast<uint32_t>(im.recs.size());
    im.recs.push_back(std::move(r));
    const Impl::Rec& stored = im.recs[rid];
    for (uint32_t i = 0; i < stored.ents.size(); ++i)
      im.incid[stored.ents[i].slot].push_back({rid, i});
  }
}

BlockState::DeleteReport BlockState::delete_object(int64_t id) {
  Impl& im = *impl_;
  auto it = im.id_slot.find(id);
  assert(it != im.id_slot.end());
  uint32_t s = it->second;

  DeleteReport rep;
  std::set<int64_t> nbrs;
  im.fn_sink = &nbrs;
  im.fn_skip = s;
  for (auto [rid, ei] : im.incid[s]) {
    Impl::Rec& r = im.recs[rid];
    if (!r.alive) {
      r.ents[ei].alive = false;
      continue;
    }
    im.splice(r, ei);
  }
  im.fn_sink = nullptr;
  im.fn_skip = UINT32_MAX;
  rep.former_neighbors.assign(nbrs.begin(), nbrs.end());
  im.incid[s].clear();
  im.slot_alive[s] = 0;
  im.id_slot.erase(it);
  return rep;
}

bool BlockState::connected(int64_t id1, int64_t id2) const {
  const Impl& im = *impl_;
  auto i1 = im.id_slot.find(id1), i2 = im.id_slot.find(id2);
  assert(i1 != im.id_slot.end() && i2 != im.id_slot.end());
  return im.h.connected(i1->second, i2->second);
}

bool BlockState::alive(int64_t id) const {
  return impl_->id_slot.find(id) != impl_->id_slot.end();
}

uint32_t BlockState::live_count() const {
  return static_cast<uint32_t>(impl_->id_slot.size());
}

std::vector<std::vector<int64_t>> BlockState::partition() const {
  const Impl& im = *impl_;
  std::vector<std::vector<int64_t>> out;
  std::vector<char> done(im.slot_obj.size(), 0);
  for (uint32_t s = 0; s < im.slot_obj.size(); ++s) {
    if (!im.slot_alive[s] || done[s]) continue;
    std::vector<int64_t> comp;
    for (VertexId v : im.h.iter_component(s)) {
      assert(im.slot_alive[v]);
      done[v] = 1;
      comp.push_back(im.slot_obj[v].id);
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::vector<int64_t> BlockState::component_members(int64_t id) const {
  const Impl& im = *impl_;
  auto it = im.id_slot.find(id);
  assert(it != im.id_slot.end());
  std::vector<int64_t> out;
  for (VertexId v : im.h.iter_component(it->second))
    out.push_back(im.slot_obj[v].id);
  std::sort(out.begin(), out.end());
  return out;
}

uint32_t BlockState::component_size(int64_t id) const {
  const Impl& im = *impl_;
  auto it = im.id_slot.find(id);
  assert(it != im.id_slot.end());
  return im.h.component_of(it->second).size;
}

int64_t BlockState::component_min_id(int64_t id) const {
  const Impl& im = *impl_;
  auto it = im.id_slot.find(id);
  assert(it != im.id_slot.end());
  int64_t best = id;
  for (VertexId v : im.h.iter_component(it->second))
    best = std::min(best, im.slot_obj[v].id);
  return best;
}

std::vector<std::string> BlockState::audit() const {
  const Impl& im = *impl_;
  std::vector<std::string> bad;
  auto complain = [&](uint32_t rid, const std::string& what) {
    bad.push_back("record " + std::to_string(rid) + ": " + what);
  };
  for (uint32_t rid = 0; rid < im.recs.size(); ++rid) {
    const Impl::Rec& r = im.recs[rid];
    if (r.deletions > 2ull * r.initial_len)
      complain(rid, "deletions " + std::to_string(r.deletions) +
                        " exceed twice initial length " +
                        std::to_string(r.initial_len));
    if (!r.alive) {
      if (r.assigned_alive != 0 && r.members_alive != 0)
        complain(rid, "purged with both sides alive");
      for (const Impl::Entry& e : r.ents)
        if (e.has_edge) complain(rid, "purged entry still holds an edge");
      continue;
    }
    if (r.assigned_alive == 0) complain(rid, "active with no alive assignee");
    if (r.members_alive == 0) complain(rid, "active with no alive member");
    uint32_t chain_len = 0, chain_assignees = 0, alive_entries = 0;
    for (const Impl::Entry& e : r.ents)
      if (e.alive) ++alive_entries;
    int32_t prev = -1;
    for (int32_t i = r.head; i != -1; i = r.ents[i].next) {
      const Impl::Entry& e = r.ents[i];
      ++chain_len;
      if (chain_len > r.ents.size()) {
        complain(rid, "chain does not terminate");
        break;
      }
      if (!e.alive) complain(rid, "dead entry still chained");
      if (e.prev != prev) complain(rid, "broken back link");
      if (!im.slot_alive[e.slot]) complain(rid, "entry for a dead object");
      if (e.assignee) ++chain_assignees;
      if (e.next != -1) {
        if (!e.has_edge || !im.h.edge_alive(e.edge))
          complain(rid, "missing edge to successor");
      } else if (e.has_edge) {
        complain(rid, "tail entry holds an edge");
      }
      prev = i;
    }
    if (chain_len != alive_entries)
      complain(rid, "chain skips alive entries");
    if (chain_assignees != r.assigned_alive)
      complain(rid, "assignee count drifted");
    if (chain_len - chain_assignees != r.members_alive)
      complain(rid, "member count drifted");
  }
  return bad;
}

}  // namespace dyncon
