#include "dyncon/geom_conn.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "dyncon/subgraph_conn.hpp"

namespace dyncon {

// The helper graph per phase: base vertices are the frozen objects X, the
// components of X, and the canonical subsets over X, with subset-member
// edges static in the base graph.  Component-object edges, assignment edges
// of new arrivals, and direct edges between intersecting arrivals are all
// simulated edges.  A subset vertex is active exactly while it keeps at
// least one live assignee and one live member; with either side empty its
// path role has no live witness, so activating it could merge objects that
// are no longer connected.
struct GeomState::Impl {
  ProviderKind kind;
  Rational b;
  Counters* cnt = nullptr;
  const std::function<void(const BlockState&)>* observer = nullptr;
  int dim = 0;

  struct XRec {
    int64_t id = -1;
    GeomObject obj;
    VertexId v = 0;
    VertexId comp_v = 0;
    SubgraphConn::EdgeHandle a_h;
    bool alive = true;
  };
  struct DEdge {
    SubgraphConn::EdgeHandle h;
    bool alive = true;
  };
  struct YRec {
    int64_t id = -1;
    GeomObject obj;
    VertexId v = 0;
    bool alive = true;
    std::vector<std::pair<uint32_t, SubgraphConn::EdgeHandle>> c_edges;
    std::vector<uint32_t> d_ids;
  };
  struct LiveRef {
    bool in_x = false;
    uint32_t idx = 0;
  };

  std::unordered_map<int64_t, LiveRef> live;

  // Phase state, rebuilt wholesale every y updates.
  std::unique_ptr<BlockState> bs;
  std::optional<CanonicalCollection> coll;
  std::unique_ptr<SubgraphConn> inner;
  std::vector<XRec> xrecs;
  std::vector<YRec> yrecs;
  std::vector<DEdge> dedges;
  std::vector<uint32_t> assigned, member_live;
  std::vector<char> sub_active;
  std::vector<std::vector<uint32_t>> subs_of_member;
  uint32_t nx = 0, ncomp0 = 0, nsub = 0;
  uint64_t y_cur = 1, delta_cur = 1, upd_in_phase = 0;

  VertexId sub_v(uint32_t sid) const { return nx + ncomp0 + sid; }

  void obs() {
    if (observer && *observer) (*observer)(*bs);
  }

  void sync_subset(uint32_t sid) {
    bool want = assigned[sid] > 0 && member_live[sid] > 0;
    if (want != (sub_active[sid] != 0)) {
      if (want)
        inner->turn_on(sub_v(sid));
      else
        inner->turn_off(sub_v(sid));
      sub_active[sid] = want ? 1 : 0;
    }
  }

  void phase_reset() {
    std::vector<GeomObject> lv;
    for (const XRec& x : xrecs)
      if (x.alive) lv.push_back(x.obj);
    for (const YRec& y : yrecs)
      if (y.alive) lv.push_back(y.obj);
    std::sort(lv.begin(), lv.end(),
              [](const GeomObject& a, const GeomObject& b2) {
                return a.id < b2.id;
              });

    GeomParams gp = geom_params(std::max<uint64_t>(lv.size(), 1), b);
    y_cur = gp.y;
    delta_cur = gp.delta;
    upd_in_phase = 0;

    live.clear();
    xrecs.clear();
    yrecs.clear();
    dedges.clear();
    bs = std::make_unique<BlockState>(kind, cnt);
    if (!lv.empty()) {
      bs->insert_block(lv);
      obs();
    }
    coll.emplace(build_collection(kind, lv));
    auto comps = bs->partition();

    nx = static_cast<uint32_t>(lv.size());
    ncomp0 = static_cast<uint32_t>(comps.size());
    nsub = coll->subset_count();

    xrecs.reserve(nx);
    for (uint32_t i = 0; i < nx; ++i) {
      xrecs.push_back({lv[i].id, lv[i], i, 0, {}, true});
      live[lv[i].id] = {true, i};
    }

    BaseGraph g = BaseGraph::make(nx + ncomp0 + nsub);
    subs_of_member.assign(nx, {});
    assigned.assign(nsub, 0);
    member_live.assign(nsub, 0);
    sub_active.assign(nsub, 0);
    for (uint32_t sid = 0; sid < nsub; ++sid) {
      for (int64_t mid : coll->subset_members(sid)) {
        uint32_t xi = live.at(mid).idx;
        g.add_edge(sub_v(sid), xrecs[xi].v);
        subs_of_member[xi].push_back(sid);
      }
      member_live[sid] = coll->subset_size(sid);
    }

    SubgraphConfig cfg;
    cfg.delta = delta_cur;
    cfg.q = degree_params(std::max<uint64_t>(1, g.m() + nx), delta_cur).q;
    cfg.forced_high.assign(g.n, 0);
    for (uint32_t sid = 0; sid < nsub; ++sid)
      if (static_cast<uint64_t>(coll->subset_size(sid)) * delta_cur > nx)
        cfg.forced_high[sub_v(sid)] = 1;
    std::vector<char> act(g.n, 1);
    for (uint32_t sid = 0; sid < nsub; ++sid) act[sub_v(sid)] = 0;
    inner = std::make_unique<SubgraphConn>(g, Policy::DegreeSensitive, cfg,
                                           act, cnt);

    for (uint32_t k = 0; k < comps.size(); ++k) {
      VertexId cv = nx + k;
      for (int64_t mid : comps[k]) {
        XRec& xr = xrecs[live.at(mid).idx];
        xr.comp_v = cv;
        xr.a_h = inner->add_dyn_edge(cv, xr.v);
      }
    }
  }

  void tick() {
    if (++upd_in_phase >= y_cur) phase_reset();
  }

  void do_insert(const GeomObject& obj) {
    assert(obj.valid());
    if (dim == 0)
      dim = obj.dim();
    else
      assert(obj.dim() == dim);
    assert(live.find(obj.id) == live.end());

    YRec yr;
    yr.id = obj.id;
    yr.obj = obj;
    yr.v = inner->add_vertex();
    inner->turn_on(yr.v);
    if (coll->object_count() > 0) {
      for (uint32_t sid : coll->query(obj)) {
        yr.c_edges.push_back({sid, inner->add_dyn_edge(yr.v, sub_v(sid))});
        ++assigned[sid];
        sync_subset(sid);
      }
    }
    for (uint32_t yi = 0; yi < yrecs.size(); ++yi) {
      if (!yrecs[yi].alive || !intersects(yrecs[yi].obj, obj)) continue;
      uint32_t de = static_cast<uint32_t>(dedges.size());
      dedges.push_back({inner->add_dyn_edge(yr.v, yrecs[yi].v), true});
      yr.d_ids.push_back(de);
      yrecs[yi].d_ids.push_back(de);
    }
    uint32_t yi = static_cast<uint32_t>(yrecs.size());
    yrecs.push_back(std::move(yr));
    live[obj.id] = {false, yi};
    tick();
  }

  void do_delete(int64_t id) {
    auto it = live.find(id);
    assert(it != live.end());
    LiveRef ref = it->second;
    live.erase(it);

    if (ref.in_x) {
      XRec& xr = xrecs[ref.idx];
      xr.alive = false;
      inner->remove_dyn_edge(xr.a_h);
      inner->turn_off(xr.v);
      for (uint32_t sid : subs_of_member[ref.idx]) {
        assert(member_live[sid] > 0);
        --member_live[sid];
        sync_subset(sid);
      }
      auto rep = bs->delete_object(id);
      obs();
      if (!rep.former_neighbors.empty()) {
        // One representative per fragment, keyed by the fragment's smallest
        // id; the largest fragment keeps the old component vertex.
        std::map<int64_t, int64_t> frag;
        for (int64_t fn : rep.former_neighbors)
          frag.emplace(bs->component_min_id(fn), fn);
        if (frag.size() > 1) {
          int64_t win_key = frag.begin()->first;
          uint32_t win_sz = 0;
          for (const auto& [key, fn] : frag) {
            uint32_t sz = bs->component_size(fn);
            if (sz > win_sz) {
              win_sz = sz;
              win_key = key;
            }
          }
          for (const auto& [key, fn] : frag) {
            if (key == win_key) continue;
            if (cnt) ++cnt->component_splits;
            VertexId nv = inner->add_vertex();
            inner->turn_on(nv);
            for (int64_t mid : bs->component_members(fn)) {
              XRec& w = xrecs[live.at(mid).idx];
              inner->remove_dyn_edge(w.a_h);
              w.a_h = inner->add_dyn_edge(nv, w.v);
              w.comp_v = nv;
            }
          }
        }
      }
    } else {
      YRec& yr = yrecs[ref.idx];
      yr.alive = false;
      for (auto& [sid, h] : yr.c_edges) {
        inner->remove_dyn_edge(h);
        assert(assigned[sid] > 0);
        --assigned[sid];
        sync_subset(sid);
      }
      yr.c_edges.clear();
      for (uint32_t de : yr.d_ids) {
        if (dedges[de].alive) {
          inner->remove_dyn_edge(dedges[de].h);
          dedges[de].alive = false;
        }
      }
      inner->turn_off(yr.v);
    }
    tick();
  }

  VertexId vertex_of(const LiveRef& ref) const {
    return ref.in_x ? xrecs[ref.idx].v : yrecs[ref.idx].v;
  }
};

GeomState::GeomState(ProviderKind provider, Rational b, Counters* counters)
    : impl_(new Impl) {
  assert(Rational(0) < b && b <= Rational(1));
  impl_->kind = provider;
  impl_->b = b;
  impl_->cnt = counters;
  impl_->observer = &blocks_observer;
  impl_->phase_reset();
}

GeomState::~GeomState() = default;

void GeomState::insert(const GeomObject& obj) { impl_->do_insert(obj); }

void GeomState::delete_object(int64_t id) { impl_->do_delete(id); }

bool GeomState::connected(int64_t id1, int64_t id2) const {
  const Impl& im = *impl_;
  auto i1 = im.live.find(id1), i2 = im.live.find(id2);
  assert(i1 != im.live.end() && i2 != im.live.end());
  return im.inner->connected(im.vertex_of(i1->second),
                             im.vertex_of(i2->second));
}

bool GeomState::alive(int64_t id) const {
  return impl_->live.find(id) != impl_->live.end();
}

uint32_t GeomState::live_count() const {
  return static_cast<uint32_t>(impl_->live.size());
}

uint64_t GeomState::phase_y() const { return impl_->y_cur; }
uint64_t GeomState::inner_delta() const { return impl_->delta_cur; }

ExponentPair GeomState::exponents() const {
  return exponents_for_b(impl_->b);
}

std::vector<std::string> GeomState::audit() const {
  const Impl& im = *impl_;
  std::vector<std::string> bad;
  for (const std::string& v : im.inner->audit()) bad.push_back("inner: " + v);

  std::vector<uint32_t> want_assigned(im.nsub, 0), want_members(im.nsub, 0);
  uint64_t live_y = 0;
  for (const Impl::YRec& yr : im.yrecs) {
    if (!yr.alive) continue;
    ++live_y;
    if (im.coll->object_count() > 0)
      for (uint32_t sid : im.coll->query(yr.obj)) ++want_assigned[sid];
    if (yr.c_edges.size() > im.coll->query_count_bound())
      bad.push_back("arrival " + std::to_string(yr.id) +
                    " exceeds the assignment budget");
    if (!im.inner->is_active(yr.v))
      bad.push_back("live arrival " + std::to_string(yr.id) + " inactive");
  }
  for (uint32_t xi = 0; xi < im.xrecs.size(); ++xi) {
    const Impl::XRec& xr = im.xrecs[xi];
    if (xr.alive) {
      for (uint32_t sid : im.subs_of_member[xi]) ++want_members[sid];
      if (!im.inner->is_active(xr.v))
        bad.push_back("live object " + std::to_string(xr.id) + " inactive");
      if (!im.inner->dyn_edge_alive(xr.a_h))
        bad.push_back("object " + std::to_string(xr.id) +
                      " lost its component edge");
    } else if (im.inner->is_active(xr.v)) {
      bad.push_back("dead object " + std::to_string(xr.id) + " active");
    }
  }
  for (uint32_t sid = 0; sid < im.nsub; ++sid) {
    if (im.assigned[sid] != want_assigned[sid])
      bad.push_back("subset " + std::to_string(sid) +
                    " assignee count drifted");
    if (im.member_live[sid] != want_members[sid])
      bad.push_back("subset " + std::to_string(sid) + " member count drifted");
    bool want = im.assigned[sid] > 0 && im.member_live[sid] > 0;
    if ((im.sub_active[sid] != 0) != want ||
        im.inner->is_active(im.sub_v(sid)) != want)
      bad.push_back("subset " + std::to_string(sid) + " activation wrong");
  }

  if (live_y > im.y_cur)
    bad.push_back("arrival buffer exceeds the phase length");
  uint64_t d_alive = 0;
  for (const Impl::DEdge& de : im.dedges)
    if (de.alive) ++d_alive;
  if (d_alive > im.y_cur * im.y_cur)
    bad.push_back("direct pair edges exceed the phase budget");

  // Component vertices agree with the component structure: same component
  // vertex iff same block component.
  std::map<VertexId, int64_t> cv_key;
  std::map<int64_t, VertexId> key_cv;
  for (const Impl::XRec& xr : im.xrecs) {
    if (!xr.alive) continue;
    int64_t key = im.bs->component_min_id(xr.id);
    auto a = cv_key.emplace(xr.comp_v, key);
    if (!a.second && a.first->second != key)
      bad.push_back("component vertex spans two block components");
    auto b2 = key_cv.emplace(key, xr.comp_v);
    if (!b2.second && b2.first->second != xr.comp_v)
      bad.push_back("block component split across component vertices");
  }
  return bad;
}

}  // namespace dyncon
