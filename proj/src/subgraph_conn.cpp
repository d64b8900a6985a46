#include "dyncon/subgraph_conn.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dyncon/dyn_forest.hpp"

namespace dyncon {

namespace {

using EId = DynForest::EdgeId;

uint64_t pair_key(uint32_t a, uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | b;
}

// Vertex-record key; not symmetric, the two id spaces differ.
uint64_t vr_key(uint32_t u, uint32_t rid) {
  return (static_cast<uint64_t>(u) << 32) | rid;
}

struct UnionFind {
  std::vector<uint32_t> p;
  explicit UnionFind(size_t n) : p(n) {
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<uint32_t>(i);
  }
  uint32_t find(uint32_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(uint32_t a, uint32_t b) { p[find(a)] = find(b); }
};

}  // namespace

struct SubgraphConn::Impl {
  BaseGraph g;
  Policy policy;
  uint64_t delta, qlen;
  std::vector<char> forced;  // class override; indices past the end are low
  bool has_forced;
  Counters* cnt;

  enum class Kind : uint8_t { Base, Helper };
  std::vector<Kind> kind;
  std::vector<char> active, in_p, in_q;
  std::vector<char> vhigh;  // degree-sensitive class, fixed at construction
  std::vector<VertexId> high_verts;
  static constexpr uint32_t kNoRec = UINT32_MAX;
  std::vector<uint32_t> rec_of;  // valid while in_p

  struct DynEdge {
    VertexId z = 0, u = 0, v = 0;
    uint32_t gen = 0;
    bool alive = false;
  };
  std::vector<DynEdge> dyn;           // slots are never reused
  std::vector<uint32_t> helper_slot;  // per vertex; set for helpers only
  std::vector<std::vector<uint32_t>> sim_adj;  // live helper slots per end

  // One record per component of P.  gdeg counts incidences from all of V,
  // so edges inside the component count twice.  c_active marks that the
  // record's low-component contribution is currently folded into the pair
  // table; surgery suppresses flag flips while a deactivation restructures.
  struct Rec {
    bool alive = false, high = false, c_active = false, surgery = false;
    uint32_t gfvid = 0;
    uint64_t gdeg = 0;
    std::unordered_set<VertexId> radj;     // vertices with gamma > 0
    std::unordered_set<VertexId> b_nbrs;   // current (b) partners
    std::unordered_set<VertexId> bp_nbrs;  // current (b') partners
  };
  std::vector<Rec> recs;
  std::vector<uint32_t> free_recs, free_gfvids;

  std::vector<std::unordered_map<uint32_t, uint32_t>> gamma;  // per vertex
  std::unordered_map<uint64_t, uint32_t> cmap;  // pair -> low-comp count

  DynForest gf;  // helper graph: universe vertices plus record vertices
  DynForest pf;  // spanning structure of the P-induced subgraph
  std::vector<uint32_t> gf_of;  // universe vertex -> gf vertex

  std::unordered_map<uint64_t, EId> ea;               // (a): pair
  std::unordered_map<uint64_t, EId> eb, ebp;          // (b)/(b'): vr_key
  std::unordered_map<uint64_t, std::vector<EId>> ec;  // (c): pair, multi
  std::unordered_map<uint64_t, EId> pedges;           // distinct P pairs
  std::vector<std::unordered_set<VertexId>> a_nbrs;

  std::vector<VertexId> q_list;  // may hold stale entries; in_q is the truth
  uint32_t q_count = 0;
  uint64_t updates_done = 0;

  Impl(const BaseGraph& g_, Policy pol, SubgraphConfig cfg,
       const std::vector<char>& act0, Counters* c)
      : g(g_),
        policy(pol),
        delta(cfg.delta),
        qlen(cfg.q),
        forced(std::move(cfg.forced_high)),
        has_forced(!forced.empty()),
        cnt(c) {
    assert(delta >= 1 && qlen >= 1);
    assert(act0.size() == g.n);
    assert(policy == Policy::DegreeSensitive || !has_forced);
    uint32_t n0 = g.n;
    kind.assign(n0, Kind::Base);
    active.assign(act0.begin(), act0.end());
    for (auto& a : active) a = a ? 1 : 0;
    in_p.assign(n0, 0);
    in_q.assign(n0, 0);
    rec_of.assign(n0, kNoRec);
    helper_slot.assign(n0, UINT32_MAX);
    gamma.resize(n0);
    sim_adj.resize(n0);
    a_nbrs.resize(n0);
    vhigh.assign(n0, 0);
    if (policy == Policy::DegreeSensitive) {
      for (VertexId v = 0; v < n0; ++v) {
        if (has_forced)
          vhigh[v] = v < forced.size() && forced[v];
        else
          vhigh[v] = static_cast<uint64_t>(g.deg(v)) * delta > g.m();
        if (vhigh[v]) high_verts.push_back(v);
      }
    }
    for (uint32_t i = 0; i < n0; ++i) {
      gf_of.push_back(gf.add_vertex());
      pf.add_vertex();
    }
    rebuild();
  }

  bool is_vhigh(VertexId v) const { return v < vhigh.size() && vhigh[v]; }

  bool helper_dead(VertexId v) const {
    return kind[v] == Kind::Helper && !dyn[helper_slot[v]].alive;
  }

  template <class F>
  void for_each_eff_nbr(VertexId x, F&& f) const {
    if (kind[x] == Kind::Helper) {
      const DynEdge& d = dyn[helper_slot[x]];
      if (!d.alive) return;
      f(d.u);
      f(d.v);
      return;
    }
    if (x < g.n)
      for (const auto& arc : g.adj[x]) f(arc.to);
    for (uint32_t slot : sim_adj[x]) {
      assert(dyn[slot].alive);
      f(dyn[slot].z);
    }
  }

  // ---- counted forest mutations ----
  EId glink(uint32_t a, uint32_t b) {
    if (cnt) ++cnt->gstar_edge_updates;
    return gf.link(a, b);
  }
  void gcut(EId e) {
    if (cnt) ++cnt->gstar_edge_updates;
    gf.cut_quiet(e);
  }
  EId plink(uint32_t a, uint32_t b) {
    if (cnt) ++cnt->gstar_edge_updates;
    return pf.link(a, b);
  }
  void pcut(EId e) {
    if (cnt) ++cnt->gstar_edge_updates;
    pf.cut_quiet(e);
  }

  // ---- typed helper-graph edges ----
  void add_a_edge(VertexId u, VertexId w) {
    ea.emplace(pair_key(u, w), glink(gf_of[u], gf_of[w]));
    a_nbrs[u].insert(w);
    a_nbrs[w].insert(u);
  }
  void rm_a_edge(VertexId u, VertexId w) {
    auto it = ea.find(pair_key(u, w));
    assert(it != ea.end());
    gcut(it->second);
    ea.erase(it);
    a_nbrs[u].erase(w);
    a_nbrs[w].erase(u);
  }
  void add_b_edge(VertexId u, uint32_t rid) {
    eb.emplace(vr_key(u, rid), glink(gf_of[u], recs[rid].gfvid));
    recs[rid].b_nbrs.insert(u);
  }
  void rm_b_edge(VertexId u, uint32_t rid) {
    auto it = eb.find(vr_key(u, rid));
    if (it == eb.end()) return;
    gcut(it->second);
    eb.erase(it);
    recs[rid].b_nbrs.erase(u);
  }
  void add_bp_edge(VertexId u, uint32_t rid) {
    ebp.emplace(vr_key(u, rid), glink(gf_of[u], recs[rid].gfvid));
    recs[rid].bp_nbrs.insert(u);
  }
  void rm_bp_edge(VertexId u, uint32_t rid) {
    auto it = ebp.find(vr_key(u, rid));
    if (it == ebp.end()) return;
    gcut(it->second);
    ebp.erase(it);
    recs[rid].bp_nbrs.erase(u);
  }
  void add_c_edge(VertexId u, VertexId w) {
    ec[pair_key(u, w)].push_back(glink(gf_of[u], gf_of[w]));
  }

  // ---- pair table ----
  // Degree-sensitive mode keeps the table only for pairs with at least one
  // high endpoint; everything else flows through (b') edges.
  void c_set(VertexId u, VertexId w, int d) {
    assert(u != w);
    if (policy == Policy::DegreeSensitive && !is_vhigh(u) && !is_vhigh(w))
      return;
    if (cnt) ++cnt->c_updates;
    uint64_t key = pair_key(u, w);
    if (d > 0) {
      if (++cmap[key] == 1 && in_q[u] && in_q[w]) add_a_edge(u, w);
    } else {
      auto it = cmap.find(key);
      assert(it != cmap.end() && it->second > 0);
      if (--it->second == 0) {
        cmap.erase(it);
        if (ea.count(key)) rm_a_edge(u, w);
      }
    }
  }

  void add_contribution(uint32_t rid) {
    Rec& r = recs[rid];
    assert(!r.c_active && !r.high);
    r.c_active = true;
    std::vector<VertexId> vs(r.radj.begin(), r.radj.end());
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j) c_set(vs[i], vs[j], +1);
  }
  void remove_contribution(uint32_t rid) {
    Rec& r = recs[rid];
    assert(r.c_active);
    r.c_active = false;
    std::vector<VertexId> vs(r.radj.begin(), r.radj.end());
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j) c_set(vs[i], vs[j], -1);
  }

  // ---- incidence table chokepoints ----
  void gamma_inc(VertexId u, uint32_t rid) {
    Rec& r = recs[rid];
    assert(r.alive);
    uint32_t m = ++gamma[u][rid];
    ++r.gdeg;
    if (cnt) ++cnt->gamma_updates;
    if (m == 1) {
      if (r.c_active)
        for (VertexId w : r.radj) c_set(u, w, +1);
      r.radj.insert(u);
      if (in_q[u]) {
        if (r.high) add_b_edge(u, rid);
        if (policy == Policy::DegreeSensitive && !is_vhigh(u))
          add_bp_edge(u, rid);
      }
    }
    if (!r.surgery) maybe_flip(rid);
  }
  void gamma_dec(VertexId u, uint32_t rid) {
    Rec& r = recs[rid];
    auto it = gamma[u].find(rid);
    assert(it != gamma[u].end() && it->second > 0);
    uint32_t m = --it->second;
    assert(r.gdeg > 0);
    --r.gdeg;
    if (cnt) ++cnt->gamma_updates;
    if (m == 0) {
      gamma[u].erase(it);
      r.radj.erase(u);
      if (r.c_active)
        for (VertexId w : r.radj) c_set(u, w, -1);
      if (in_q[u]) {
        rm_b_edge(u, rid);
        rm_bp_edge(u, rid);
      }
    }
    if (!r.surgery) maybe_flip(rid);
  }

  // High components carry (b) edges and no pair-table contribution; low
  // components the reverse.  Both swaps scan the adjacent vertex set.
  void maybe_flip(uint32_t rid) {
    Rec& r = recs[rid];
    bool want = r.gdeg > delta;
    if (want == r.high) return;
    if (want) {
      if (r.c_active) remove_contribution(rid);
      r.high = true;
      for (VertexId u : r.radj)
        if (in_q[u] && !eb.count(vr_key(u, rid))) add_b_edge(u, rid);
    } else {
      std::vector<VertexId> bs(r.b_nbrs.begin(), r.b_nbrs.end());
      for (VertexId u : bs) rm_b_edge(u, rid);
      r.high = false;
      add_contribution(rid);
    }
  }

  void finish_surgery(uint32_t rid) {
    Rec& r = recs[rid];
    assert(r.surgery);
    r.surgery = false;
    bool want = r.gdeg > delta;
    if (want != r.high) {
      if (want) {
        r.high = true;
        for (VertexId u : r.radj)
          if (in_q[u] && !eb.count(vr_key(u, rid))) add_b_edge(u, rid);
      } else {
        std::vector<VertexId> bs(r.b_nbrs.begin(), r.b_nbrs.end());
        for (VertexId u : bs) rm_b_edge(u, rid);
        r.high = false;
      }
    }
    if (!r.high && !r.c_active) add_contribution(rid);
  }

  // ---- records ----
  uint32_t alloc_rec() {
    uint32_t rid;
    if (!free_recs.empty()) {
      rid = free_recs.back();
      free_recs.pop_back();
    } else {
      rid = static_cast<uint32_t>(recs.size());
      recs.emplace_back();
    }
    Rec& r = recs[rid];
    r.alive = true;
    r.high = false;
    r.c_active = false;
    r.surgery = false;
    r.gdeg = 0;
    r.radj.clear();
    r.b_nbrs.clear();
    r.bp_nbrs.clear();
    if (!free_gfvids.empty()) {
      r.gfvid = free_gfvids.back();
      free_gfvids.pop_back();
    } else {
      r.gfvid = gf.add_vertex();
    }
    return rid;
  }
  void kill_rec(uint32_t rid) {
    Rec& r = recs[rid];
    assert(r.alive && r.gdeg == 0 && r.radj.empty() && r.b_nbrs.empty() &&
           r.bp_nbrs.empty() && !r.c_active);
    r.alive = false;
    r.surgery = false;
    free_gfvids.push_back(r.gfvid);
    free_recs.push_back(rid);
  }

  // ---- Q membership ----
  void join_q(VertexId v) {
    assert(!in_q[v] && !in_p[v] && active[v]);
    in_q[v] = 1;
    ++q_count;
    q_list.push_back(v);
    for (const auto& [rid, m] : gamma[v]) {
      (void)m;
      Rec& r = recs[rid];
      assert(r.alive);
      if (r.high) add_b_edge(v, rid);
      if (policy == Policy::DegreeSensitive && !is_vhigh(v))
        add_bp_edge(v, rid);
    }
    for (VertexId w : q_list)
      if (in_q[w] && w != v && !a_nbrs[v].count(w) &&
          cmap.count(pair_key(v, w)))
        add_a_edge(v, w);
    for_each_eff_nbr(v, [&](VertexId w) {
      if (w != v && in_q[w]) add_c_edge(v, w);
    });
  }
  void leave_q(VertexId v) {
    assert(in_q[v]);
    for (const auto& [rid, m] : gamma[v]) {
      (void)m;
      rm_b_edge(v, rid);
      rm_bp_edge(v, rid);
    }
    std::vector<VertexId> an(a_nbrs[v].begin(), a_nbrs[v].end());
    for (VertexId w : an) rm_a_edge(v, w);
    assert(a_nbrs[v].empty());
    for_each_eff_nbr(v, [&](VertexId w) {
      if (w == v) return;
      auto it = ec.find(pair_key(v, w));
      if (it == ec.end()) return;
      for (EId e : it->second) gcut(e);
      ec.erase(it);
    });
    in_q[v] = 0;
    --q_count;
  }

  // ---- deletion-only part ----
  // Removes v from its record: pair-table contribution out, v's incidences
  // out, spanning edges cut, surviving pieces re-recorded (largest keeps the
  // record), contributions and flags reconciled.
  void deactivate_p(VertexId v) {
    assert(in_p[v]);
    uint32_t rid0 = rec_of[v];
    assert(rid0 != kNoRec && recs[rid0].alive);
    Rec& r0 = recs[rid0];
    r0.surgery = true;
    if (r0.c_active) remove_contribution(rid0);
    std::unordered_set<VertexId> exn;
    for_each_eff_nbr(v, [&](VertexId w) {
      if (w != v && in_p[w]) exn.insert(w);
    });
    for (VertexId w : exn) {
      auto it = pedges.find(pair_key(v, w));
      assert(it != pedges.end());
      pcut(it->second);
      pedges.erase(it);
    }
    for_each_eff_nbr(v, [&](VertexId w) { gamma_dec(w, rid0); });
    in_p[v] = 0;
    rec_of[v] = kNoRec;

    std::vector<DynForest::ComponentHandle> pieces;
    std::unordered_set<const void*> seen;
    for (VertexId w : exn) {
      auto h = pf.component_of(w);
      if (seen.insert(h.root).second) pieces.push_back(h);
    }
    if (pieces.empty()) {
      assert(r0.gdeg == 0);
      kill_rec(rid0);
      return;
    }
    size_t win = 0;
    for (size_t i = 1; i < pieces.size(); ++i) {
      if (pieces[i].size > pieces[win].size ||
          (pieces[i].size == pieces[win].size &&
           pieces[i].min_vid < pieces[win].min_vid))
        win = i;
    }
    for (size_t i = 0; i < pieces.size(); ++i) {
      if (i == win) continue;
      uint32_t rid = alloc_rec();
      recs[rid].surgery = true;
      if (cnt) ++cnt->component_splits;
      auto members = pf.iter_component(pieces[i].anchor);
      for (VertexId x : members) rec_of[x] = rid;
      for (VertexId x : members)
        for_each_eff_nbr(x, [&](VertexId w) {
          gamma_dec(w, rid0);
          gamma_inc(w, rid);
        });
      finish_surgery(rid);
    }
    finish_surgery(rid0);
  }

  void phase_tick() {
    if (++updates_done >= qlen) rebuild();
  }

  // ---- phase boundary ----
  void rebuild() {
    for (auto& [k, e] : ea) {
      (void)k;
      gcut(e);
    }
    ea.clear();
    for (auto& s : a_nbrs) s.clear();
    for (auto& [k, e] : eb) {
      (void)k;
      gcut(e);
    }
    eb.clear();
    for (auto& [k, e] : ebp) {
      (void)k;
      gcut(e);
    }
    ebp.clear();
    for (auto& [k, v] : ec) {
      (void)k;
      for (EId e : v) gcut(e);
    }
    ec.clear();
    for (auto& [k, e] : pedges) {
      (void)k;
      pcut(e);
    }
    pedges.clear();
    for (uint32_t rid = 0; rid < recs.size(); ++rid) {
      Rec& r = recs[rid];
      if (!r.alive) continue;
      r.alive = false;
      r.surgery = false;
      r.c_active = false;
      r.gdeg = 0;
      r.radj.clear();
      r.b_nbrs.clear();
      r.bp_nbrs.clear();
      free_gfvids.push_back(r.gfvid);
      free_recs.push_back(rid);
    }
    cmap.clear();
    uint32_t n = static_cast<uint32_t>(kind.size());
    for (uint32_t v = 0; v < n; ++v) {
      gamma[v].clear();
      rec_of[v] = kNoRec;
      in_q[v] = 0;
      in_p[v] = active[v];
    }
    q_list.clear();
    q_count = 0;

    UnionFind uf(n);
    for (uint32_t v = 0; v < n; ++v)
      if (in_p[v]) for_each_eff_nbr(v, [&](VertexId w) {
          if (w != v && in_p[w]) uf.unite(v, w);
        });
    std::unordered_map<uint32_t, uint32_t> rec_by_root;
    for (uint32_t v = 0; v < n; ++v) {
      if (!in_p[v]) continue;
      uint32_t root = uf.find(v);
      auto it = rec_by_root.find(root);
      if (it == rec_by_root.end())
        it = rec_by_root.emplace(root, alloc_rec()).first;
      rec_of[v] = it->second;
    }
    for (uint32_t v = 0; v < n; ++v)
      if (in_p[v]) for_each_eff_nbr(v, [&](VertexId w) {
          if (w <= v || !in_p[w]) return;
          uint64_t key = pair_key(v, w);
          if (!pedges.count(key)) pedges.emplace(key, plink(v, w));
        });
    for (uint32_t u = 0; u < n; ++u) {
      if (helper_dead(u)) continue;
      for_each_eff_nbr(u, [&](VertexId w) {
        if (!in_p[w]) return;
        uint32_t rid = rec_of[w];
        Rec& r = recs[rid];
        if (++gamma[u][rid] == 1) r.radj.insert(u);
        ++r.gdeg;
        if (cnt) ++cnt->gamma_updates;
      });
    }
    for (uint32_t rid = 0; rid < recs.size(); ++rid) {
      Rec& r = recs[rid];
      if (!r.alive) continue;
      r.high = r.gdeg > delta;
      if (!r.high) add_contribution(rid);
    }
    updates_done = 0;
  }

  // ---- queries ----
  struct Rep {
    bool isolated = false;
    uint32_t gfv = 0;
    uint32_t rid = 0;
  };
  Rep rep_of(VertexId x) const {
    if (in_q[x]) return {false, gf_of[x], 0};
    assert(in_p[x]);
    uint32_t rid = rec_of[x];
    const Rec& r = recs[rid];
    if (r.high) return {false, r.gfvid, 0};
    if (policy == Policy::Classic) {
      for (VertexId w : r.radj)
        if (in_q[w]) return {false, gf_of[w], 0};
      return {true, 0, rid};
    }
    if (!r.bp_nbrs.empty()) return {false, r.gfvid, 0};
    for (VertexId h : high_verts)
      if (in_q[h] && gamma[h].count(rid)) return {false, gf_of[h], 0};
    return {true, 0, rid};
  }

  bool connected_impl(VertexId u, VertexId v) const {
    assert(active[u] && active[v]);
    if (u == v) return true;
    Rep a = rep_of(u), b = rep_of(v);
    if (a.isolated && b.isolated) return a.rid == b.rid;
    if (a.isolated) return in_p[v] && rec_of[v] == a.rid;
    if (b.isolated) return in_p[u] && rec_of[u] == b.rid;
    return gf.connected(a.gfv, b.gfv);
  }

  // ---- audit ----
  std::vector<std::string> audit_impl() const;
  std::string canonical_impl() const;
};

std::vector<std::string> SubgraphConn::Impl::audit_impl() const {
  std::vector<std::string> out;
  auto fail = [&](const std::string& s) { out.push_back(s); };
  uint32_t n = static_cast<uint32_t>(kind.size());

  for (uint32_t v = 0; v < n; ++v) {
    if (active[v] != (in_p[v] || in_q[v]) || (in_p[v] && in_q[v]))
      fail("vertex " + std::to_string(v) + ": active/P/Q flags inconsistent");
    if (kind[v] == Kind::Helper &&
        dyn[helper_slot[v]].alive != (active[v] != 0))
      fail("helper " + std::to_string(v) + ": liveness != active");
    if (in_p[v] &&
        (rec_of[v] == kNoRec || rec_of[v] >= recs.size() ||
         !recs[rec_of[v]].alive))
      fail("vertex " + std::to_string(v) + ": bad record id");
  }
  uint32_t qc = 0;
  for (uint32_t v = 0; v < n; ++v) qc += in_q[v] ? 1 : 0;
  if (qc != q_count) fail("q_count drifted");
  if (qc > qlen) fail("|Q| exceeds q");

  uint64_t live_helpers = 0;
  for (const auto& d : dyn) live_helpers += d.alive ? 1 : 0;
  uint64_t m_total = g.m() + 2 * live_helpers;

  // Components of P from scratch.
  UnionFind uf(n);
  for (uint32_t v = 0; v < n; ++v)
    if (in_p[v]) for_each_eff_nbr(v, [&](VertexId w) {
        if (w != v && in_p[w]) uf.unite(v, w);
      });
  std::unordered_map<uint32_t, uint32_t> root_rec;
  for (uint32_t v = 0; v < n; ++v) {
    if (!in_p[v]) continue;
    uint32_t root = uf.find(v);
    auto it = root_rec.find(root);
    if (it == root_rec.end()) {
      root_rec.emplace(root, rec_of[v]);
    } else if (it->second != rec_of[v]) {
      fail("vertex " + std::to_string(v) + ": record does not match component");
    }
  }
  std::unordered_set<uint32_t> live_recs;
  for (uint32_t v = 0; v < n; ++v)
    if (in_p[v]) live_recs.insert(rec_of[v]);
  if (root_rec.size() != live_recs.size())
    fail("distinct components != distinct records");
  for (uint32_t rid = 0; rid < recs.size(); ++rid) {
    const Rec& r = recs[rid];
    if (r.alive != (live_recs.count(rid) > 0))
      fail("record " + std::to_string(rid) + ": liveness vs members");
    if (r.surgery) fail("record " + std::to_string(rid) + ": surgery flag set");
  }

  // Incidence table from scratch.
  std::vector<std::unordered_map<uint32_t, uint32_t>> want_gamma(n);
  std::vector<uint64_t> want_gdeg(recs.size(), 0);
  std::vector<std::unordered_set<VertexId>> want_radj(recs.size());
  for (uint32_t u = 0; u < n; ++u) {
    if (kind[u] == Kind::Helper && !dyn[helper_slot[u]].alive) continue;
    for_each_eff_nbr(u, [&](VertexId w) {
      if (!in_p[w] || rec_of[w] >= recs.size()) return;
      uint32_t rid = rec_of[w];
      ++want_gamma[u][rid];
      ++want_gdeg[rid];
      want_radj[rid].insert(u);
    });
  }
  for (uint32_t u = 0; u < n; ++u)
    if (gamma[u] != want_gamma[u])
      fail("vertex " + std::to_string(u) + ": incidence row mismatch");
  uint64_t high_recs = 0;
  for (uint32_t rid = 0; rid < recs.size(); ++rid) {
    const Rec& r = recs[rid];
    if (!r.alive) continue;
    if (r.gdeg != want_gdeg[rid])
      fail("record " + std::to_string(rid) + ": degree mismatch");
    if (r.radj != want_radj[rid])
      fail("record " + std::to_string(rid) + ": adjacency set mismatch");
    if (r.high != (r.gdeg > delta))
      fail("record " + std::to_string(rid) + ": class flag stale");
    if (r.c_active != !r.high)
      fail("record " + std::to_string(rid) + ": contribution flag stale");
    high_recs += r.high ? 1 : 0;
  }
  if (high_recs * (delta + 1) > 2 * m_total)
    fail("high record count exceeds degree budget");
  if (policy == Policy::DegreeSensitive && !has_forced) {
    uint64_t hv = 0;
    for (uint32_t v = 0; v < n; ++v) {
      bool want = v < g.n && static_cast<uint64_t>(g.deg(v)) * delta > g.m();
      if (is_vhigh(v) != want)
        fail("vertex " + std::to_string(v) + ": degree class mismatch");
      hv += want ? 1 : 0;
    }
    if (hv > 2 * delta) fail("high vertex count exceeds 2*delta");
  }

  // Pair table from scratch.
  std::unordered_map<uint64_t, uint32_t> want_c;
  for (uint32_t rid = 0; rid < recs.size(); ++rid) {
    const Rec& r = recs[rid];
    if (!r.alive || r.high) continue;
    std::vector<VertexId> vs(want_radj[rid].begin(), want_radj[rid].end());
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j) {
        if (policy == Policy::DegreeSensitive && !is_vhigh(vs[i]) &&
            !is_vhigh(vs[j]))
          continue;
        ++want_c[pair_key(vs[i], vs[j])];
      }
  }
  if (cmap != want_c) fail("pair table mismatch");

  // Helper-graph edge set from scratch.  Each unordered adjacency is counted
  // once, from its smaller endpoint.
  std::unordered_map<uint64_t, uint32_t> got_ec;
  for (const auto& [k, vec] : ec) {
    got_ec[k] = static_cast<uint32_t>(vec.size());
    for (EId e : vec)
      if (!gf.edge_alive(e)) fail("(c) edge dead in forest");
  }
  {
    std::unordered_map<uint64_t, uint32_t> want_ec;
    for (uint32_t v = 0; v < n; ++v)
      if (in_q[v]) for_each_eff_nbr(v, [&](VertexId w) {
          if (w > v && in_q[w]) ++want_ec[pair_key(v, w)];
        });
    if (got_ec != want_ec) fail("(c) edge multiset mismatch");
  }
  std::unordered_map<uint64_t, char> want_ea;
  for (const auto& [key, cval] : cmap) {
    (void)cval;
    VertexId u = static_cast<VertexId>(key >> 32);
    VertexId w = static_cast<VertexId>(key & 0xffffffffu);
    if (in_q[u] && in_q[w]) want_ea[key] = 1;
  }
  if (want_ea.size() != ea.size()) fail("(a) edge count mismatch");
  for (const auto& [key, e] : ea) {
    if (!want_ea.count(key)) fail("unexpected (a) edge");
    if (!gf.edge_alive(e)) fail("(a) edge dead in forest");
  }
  std::unordered_map<uint64_t, char> want_eb, want_ebp;
  for (uint32_t u = 0; u < n; ++u) {
    if (!in_q[u]) continue;
    for (const auto& [rid, m] : gamma[u]) {
      (void)m;
      if (recs[rid].high) want_eb[vr_key(u, rid)] = 1;
      if (policy == Policy::DegreeSensitive && !is_vhigh(u))
        want_ebp[vr_key(u, rid)] = 1;
    }
  }
  if (want_eb.size() != eb.size()) fail("(b) edge count mismatch");
  for (const auto& [key, e] : eb) {
    if (!want_eb.count(key)) fail("unexpected (b) edge");
    if (!gf.edge_alive(e)) fail("(b) edge dead in forest");
  }
  if (want_ebp.size() != ebp.size()) fail("(b') edge count mismatch");
  for (const auto& [key, e] : ebp) {
    if (!want_ebp.count(key)) fail("unexpected (b') edge");
    if (!gf.edge_alive(e)) fail("(b') edge dead in forest");
  }
  for (uint32_t rid = 0; rid < recs.size(); ++rid) {
    const Rec& r = recs[rid];
    if (!r.alive) continue;
    std::unordered_set<VertexId> wb, wbp;
    for (VertexId u : want_radj[rid]) {
      if (in_q[u] && r.high) wb.insert(u);
      if (in_q[u] && policy == Policy::DegreeSensitive && !is_vhigh(u))
        wbp.insert(u);
    }
    if (r.b_nbrs != wb)
      fail("record " + std::to_string(rid) + ": (b) partner set mismatch");
    if (r.bp_nbrs != wbp)
      fail("record " + std::to_string(rid) + ": (b') partner set mismatch");
  }

  // Spanning structure of P.
  std::unordered_set<uint64_t> want_p;
  for (uint32_t v = 0; v < n; ++v)
    if (in_p[v]) for_each_eff_nbr(v, [&](VertexId w) {
        if (w != v && in_p[w]) want_p.insert(pair_key(v, w));
      });
  if (want_p.size() != pedges.size()) fail("P spanning pair count mismatch");
  for (const auto& [key, e] : pedges) {
    if (!want_p.count(key)) fail("unexpected P spanning pair");
    if (!pf.edge_alive(e)) fail("P spanning edge dead in forest");
  }
  for (uint32_t rid : live_recs) {
    VertexId first = UINT32_MAX;
    std::vector<VertexId> members;
    for (uint32_t v = 0; v < n; ++v)
      if (in_p[v] && rec_of[v] == rid) {
        members.push_back(v);
        if (first == UINT32_MAX) first = v;
      }
    if (first != UINT32_MAX && pf.iter_component(first) != members)
      fail("record " + std::to_string(rid) + ": spanning component mismatch");
  }
  return out;
}

std::string SubgraphConn::Impl::canonical_impl() const {
  std::ostringstream os;
  uint32_t n = static_cast<uint32_t>(kind.size());
  os << "active:";
  for (uint32_t v = 0; v < n; ++v)
    if (active[v]) os << ' ' << v;
  os << "\nq:";
  {
    std::vector<VertexId> qs;
    for (uint32_t v = 0; v < n; ++v)
      if (in_q[v]) qs.push_back(v);
    for (VertexId v : qs) os << ' ' << v;
  }
  os << "\nrecs:\n";
  {
    std::vector<std::vector<VertexId>> blocks;
    std::unordered_map<uint32_t, size_t> idx;
    for (uint32_t v = 0; v < n; ++v) {
      if (!in_p[v]) continue;
      auto it = idx.find(rec_of[v]);
      if (it == idx.end()) {
        idx.emplace(rec_of[v], blocks.size());
        blocks.push_back({v});
      } else {
        blocks[it->second].push_back(v);
      }
    }
    std::sort(blocks.begin(), blocks.end());
    for (const auto& b : blocks) {
      uint32_t rid = rec_of[b.front()];
      os << "  {";
      for (size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
      os << "} deg=" << recs[rid].gdeg << (recs[rid].high ? " high" : " low")
         << '\n';
    }
  }
  os << "c:";
  {
    std::vector<uint64_t> keys;
    for (const auto& [k, v] : cmap) {
      (void)v;
      keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    for (uint64_t k : keys)
      os << " (" << (k >> 32) << ',' << (k & 0xffffffffu) << ")="
         << cmap.at(k);
  }
  os << "\nedges:";
  {
    std::vector<std::string> lines;
    auto rec_name = [&](uint32_t rid) {
      VertexId mn = UINT32_MAX;
      for (uint32_t v = 0; v < n; ++v)
        if (in_p[v] && rec_of[v] == rid && v < mn) mn = v;
      return mn;
    };
    for (const auto& [k, e] : ea) {
      (void)e;
      lines.push_back("a(" + std::to_string(k >> 32) + "," +
                      std::to_string(k & 0xffffffffu) + ")");
    }
    for (const auto& [k, e] : eb) {
      (void)e;
      lines.push_back("b(" + std::to_string(k >> 32) + ",r" +
                      std::to_string(rec_name(static_cast<uint32_t>(k))) + ")");
    }
    for (const auto& [k, e] : ebp) {
      (void)e;
      lines.push_back("b'(" + std::to_string(k >> 32) + ",r" +
                      std::to_string(rec_name(static_cast<uint32_t>(k))) + ")");
    }
    for (const auto& [k, v] : ec)
      lines.push_back("c(" + std::to_string(k >> 32) + "," +
                      std::to_string(k & 0xffffffffu) + ")x" +
                      std::to_string(v.size()));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << ' ' << l;
  }
  os << '\n';
  return os.str();
}

SubgraphConn::SubgraphConn(const BaseGraph& g, Policy policy,
                           SubgraphConfig cfg,
                           const std::vector<char>& initially_active,
                           Counters* counters)
    : impl_(new Impl(g, policy, std::move(cfg), initially_active, counters)) {}

SubgraphConn::~SubgraphConn() = default;

void SubgraphConn::turn_on(VertexId v) {
  Impl& im = *impl_;
  assert(v < im.kind.size() && !im.active[v] &&
         im.kind[v] == Impl::Kind::Base);
  im.active[v] = 1;
  im.join_q(v);
  im.phase_tick();
}

void SubgraphConn::turn_off(VertexId v) {
  Impl& im = *impl_;
  assert(v < im.kind.size() && im.active[v] &&
         im.kind[v] == Impl::Kind::Base);
  if (im.in_q[v])
    im.leave_q(v);
  else
    im.deactivate_p(v);
  im.active[v] = 0;
  im.phase_tick();
}

bool SubgraphConn::connected(VertexId u, VertexId v) const {
  return impl_->connected_impl(u, v);
}

VertexId SubgraphConn::add_vertex() {
  Impl& im = *impl_;
  VertexId v = static_cast<VertexId>(im.kind.size());
  im.kind.push_back(Impl::Kind::Base);
  im.active.push_back(0);
  im.in_p.push_back(0);
  im.in_q.push_back(0);
  im.vhigh.push_back(0);
  im.rec_of.push_back(Impl::kNoRec);
  im.helper_slot.push_back(UINT32_MAX);
  im.gamma.emplace_back();
  im.sim_adj.emplace_back();
  im.a_nbrs.emplace_back();
  im.gf_of.push_back(im.gf.add_vertex());
  VertexId pv = im.pf.add_vertex();
  (void)pv;
  assert(pv == v);
  return v;
}

SubgraphConn::EdgeHandle SubgraphConn::add_dyn_edge(VertexId u, VertexId v) {
  Impl& im = *impl_;
  assert(u < im.kind.size() && v < im.kind.size());
  assert(im.kind[u] == Impl::Kind::Base && im.kind[v] == Impl::Kind::Base);
  uint32_t slot = static_cast<uint32_t>(im.dyn.size());
  VertexId z = static_cast<VertexId>(im.kind.size());
  im.kind.push_back(Impl::Kind::Helper);
  im.active.push_back(1);
  im.in_p.push_back(0);
  im.in_q.push_back(1);
  im.vhigh.push_back(0);  // helpers are low by fiat
  im.rec_of.push_back(Impl::kNoRec);
  im.helper_slot.push_back(slot);
  im.gamma.emplace_back();
  im.sim_adj.emplace_back();
  im.a_nbrs.emplace_back();
  im.gf_of.push_back(im.gf.add_vertex());
  VertexId pv = im.pf.add_vertex();
  (void)pv;
  assert(pv == z);
  im.dyn.push_back({z, u, v, 1, true});
  im.sim_adj[u].push_back(slot);
  im.sim_adj[v].push_back(slot);
  ++im.q_count;
  im.q_list.push_back(z);
  // The incidence chokepoint also creates the pair-table entries and any
  // (a)/(b)/(b') edges z picks up.
  if (im.active[u] && im.in_p[u]) im.gamma_inc(z, im.rec_of[u]);
  if (im.active[v] && im.in_p[v]) im.gamma_inc(z, im.rec_of[v]);
  if (im.in_q[u]) im.add_c_edge(z, u);
  if (im.in_q[v]) im.add_c_edge(z, v);
  im.phase_tick();
  return {slot, 1};
}

void SubgraphConn::remove_dyn_edge(EdgeHandle h) {
  Impl& im = *impl_;
  assert(h.slot < im.dyn.size() && im.dyn[h.slot].gen == h.gen &&
         im.dyn[h.slot].alive);
  Impl::DynEdge& d = im.dyn[h.slot];
  VertexId z = d.z;
  if (im.in_q[z])
    im.leave_q(z);
  else
    im.deactivate_p(z);
  // The helper's edges vanish with it: clear its whole incidence row.
  {
    std::vector<std::pair<uint32_t, uint32_t>> row(im.gamma[z].begin(),
                                                   im.gamma[z].end());
    for (const auto& [rid, m] : row)
      for (uint32_t i = 0; i < m; ++i) im.gamma_dec(z, rid);
    assert(im.gamma[z].empty());
  }
  auto scrub = [&](VertexId end) {
    auto& sa = im.sim_adj[end];
    for (size_t i = 0; i < sa.size(); ++i)
      if (sa[i] == h.slot) {
        sa[i] = sa.back();
        sa.pop_back();
        return;
      }
    assert(false);
  };
  scrub(d.u);
  scrub(d.v);
  d.alive = false;
  im.active[z] = 0;
  im.phase_tick();
}

bool SubgraphConn::dyn_edge_alive(EdgeHandle h) const {
  const Impl& im = *impl_;
  return h.slot < im.dyn.size() && im.dyn[h.slot].gen == h.gen &&
         im.dyn[h.slot].alive;
}

void SubgraphConn::rebuild_phase() { impl_->rebuild(); }

bool SubgraphConn::is_active(VertexId v) const {
  return v < impl_->active.size() && impl_->active[v];
}

uint32_t SubgraphConn::n_universe() const {
  return static_cast<uint32_t>(impl_->kind.size());
}

uint64_t SubgraphConn::delta() const { return impl_->delta; }
uint64_t SubgraphConn::q() const { return impl_->qlen; }
uint64_t SubgraphConn::q_size() const { return impl_->q_count; }

std::vector<std::string> SubgraphConn::audit() const {
  return impl_->audit_impl();
}

std::string SubgraphConn::canonical_state() const {
  return impl_->canonical_impl();
}

}  // namespace dyncon
