#include "dyncon/offline.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dyncon/bool_matrix.hpp"
#include "dyncon/dyn_forest.hpp"
#include "dyncon/geom_components.hpp"

namespace dyncon {
namespace {

struct UnionFind {
  std::vector<uint32_t> parent;
  explicit UnionFind(uint32_t n) : parent(n) {
    for (uint32_t i = 0; i < n; ++i) parent[i] = i;
  }
  uint32_t find(uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(uint32_t a, uint32_t b) { parent[find(a)] = find(b); }
};

// One phase of the batched structure.  The universe splits into a static part
// (activations frozen for the phase, components precomputed once) and the
// declared update set q0; only q0 members may toggle until the phase ends.
// The pair table over (high, q0) comes from a single sparse Boolean product
// of the two incidence matrices, so it is written once and never adjusted.
// The helper forest carries one edge per pair with a nonzero table entry or
// a base edge inside q0, plus one edge from each low q0 member to each
// adjacent static component; an edge is alive exactly when both endpoints
// are active (components count as always active).
class PhaseEngine {
 public:
  PhaseEngine(const BaseGraph& g, std::vector<char>& act,
              const std::vector<uint32_t>& high,
              const std::vector<uint32_t>& q0, uint64_t t, bool audit,
              Counters* cnt, OfflinePhaseStats* st)
      : g_(g), act_(act), q0_(q0), cnt_(cnt) {
    const uint32_t n = g_.n;
    nq_ = static_cast<uint32_t>(q0_.size());
    q0idx_.assign(n, -1);
    for (uint32_t l = 0; l < nq_; ++l) {
      assert(q0_[l] < n && (l == 0 || q0_[l - 1] < q0_[l]));
      q0idx_[q0_[l]] = static_cast<int32_t>(l);
    }
    std::vector<char> ishigh(nq_, 0);
    for (uint32_t h : high) {
      assert(q0idx_[h] >= 0);
      ishigh[q0idx_[h]] = 1;
    }

    // Components of the static active part.
    UnionFind uf(n);
    for (const auto& e : g_.edges)
      if (static_part(e.first) && static_part(e.second))
        uf.unite(e.first, e.second);
    comp_of_.assign(n, -1);
    std::vector<int32_t> root_comp(n, -1);
    for (uint32_t v = 0; v < n; ++v) {
      if (!static_part(v)) continue;
      uint32_t r = uf.find(v);
      if (root_comp[r] < 0) root_comp[r] = static_cast<int32_t>(k_++);
      comp_of_[v] = root_comp[r];
    }

    // Incidence between q0 members and the components, deduplicated.
    member_comps_.resize(nq_);
    comp_adj_.resize(k_);
    uint64_t incidences = 0;
    for (uint32_t l = 0; l < nq_; ++l) {
      auto& mc = member_comps_[l];
      for (const auto& arc : g_.adj[q0_[l]])
        if (comp_of_[arc.to] >= 0)
          mc.push_back(static_cast<uint32_t>(comp_of_[arc.to]));
      std::sort(mc.begin(), mc.end());
      mc.erase(std::unique(mc.begin(), mc.end()), mc.end());
      for (uint32_t j : mc) comp_adj_[j].push_back(l);
      incidences += mc.size();
    }
    if (cnt_) cnt_->gamma_updates += incidences;

    // Pair table: one sparse product of (high x comps) and (comps x q0).
    BoolMatrix a(static_cast<uint32_t>(high.size()), k_);
    BoolMatrix b(k_, nq_);
    for (uint32_t i = 0; i < high.size(); ++i)
      for (uint32_t j : member_comps_[q0idx_[high[i]]]) a.set(i, j);
    for (uint32_t l = 0; l < nq_; ++l)
      for (uint32_t j : member_comps_[l]) b.set(j, l);
    uint64_t tc = std::min<uint64_t>(std::max<uint64_t>(t, 1),
                                     std::max<uint64_t>(a.ones, 1));
    uint64_t bops0 = cnt_ ? cnt_->bit_ops : 0;
    BoolMatrix c = bool_matmul_sparse(a, b, tc, cnt_);
    if (cnt_) cnt_->c_updates += c.ones;
    if (st) {
      st->n_high = a.rows;
      st->n_comps = k_;
      st->n_q0 = nq_;
      st->m1 = a.ones;
      st->m2 = b.ones;
      st->t = tc;
      st->bit_ops = cnt_ ? cnt_->bit_ops - bops0 : 0;
      // Two-term model: word-parallel dense product restricted to the high
      // middle columns, plus per-one enumeration of the low ones.
      std::vector<uint32_t> coldeg(k_, 0);
      for (uint32_t i = 0; i < a.rows; ++i)
        for (uint32_t j : member_comps_[q0idx_[high[i]]]) ++coldeg[j];
      uint64_t hmid = 0;
      for (uint32_t j = 0; j < k_; ++j)
        if (coldeg[j] >= tc) ++hmid;
      st->predicted = static_cast<uint64_t>(a.rows) * hmid * b.wpr +
                      b.ones * tc;
    }
    if (audit) {
      BoolMatrix ref(a.rows, nq_);
      for (uint32_t i = 0; i < a.rows; ++i)
        for (uint32_t j : member_comps_[q0idx_[high[i]]])
          for (uint32_t l : comp_adj_[j]) ref.set(i, l);
      assert(ref == c);
      (void)ref;
    }

    for (uint32_t v = 0; v < nq_ + k_; ++v) forest_.add_vertex();
    inc_.resize(nq_);

    // Pair edges: nonzero table entries and base edges inside q0 share one
    // liveness rule (both endpoints active), so a pair needs only one slot.
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    for (uint32_t i = 0; i < high.size(); ++i) {
      uint32_t li = static_cast<uint32_t>(q0idx_[high[i]]);
      for (uint32_t l = 0; l < nq_; ++l)
        if (l != li && c.get(i, l))
          pairs.emplace_back(std::min(li, l), std::max(li, l));
    }
    for (const auto& e : g_.edges) {
      int32_t x = q0idx_[e.first], y = q0idx_[e.second];
      if (x >= 0 && y >= 0 && x != y)
        pairs.emplace_back(static_cast<uint32_t>(std::min(x, y)),
                           static_cast<uint32_t>(std::max(x, y)));
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [x, y] : pairs) add_slot(x, y);
    // Low members attach to each adjacent component directly; high members
    // reach components only through the pair table.
    for (uint32_t l = 0; l < nq_; ++l) {
      if (ishigh[l]) continue;
      for (uint32_t j : member_comps_[l]) add_slot(l, nq_ + j);
    }
    for (auto& pe : pedges_)
      if (endpoint_active(pe.x) && endpoint_active(pe.y)) elink(pe);
  }

  void turn_on(uint32_t v) {
    int32_t l = q0idx_[v];
    assert(l >= 0 && !act_[v]);
    act_[v] = 1;
    for (uint32_t idx : inc_[l]) {
      PEdge& pe = pedges_[idx];
      uint32_t other = pe.x == static_cast<uint32_t>(l) ? pe.y : pe.x;
      if (!pe.alive && endpoint_active(other)) elink(pe);
    }
  }

  void turn_off(uint32_t v) {
    int32_t l = q0idx_[v];
    assert(l >= 0 && act_[v]);
    act_[v] = 0;
    for (uint32_t idx : inc_[l])
      if (pedges_[idx].alive) ecut(pedges_[idx]);
  }

  bool query(uint32_t u, uint32_t v) const {
    return forest_.connected(rep(u), rep(v));
  }

 private:
  struct PEdge {
    uint32_t x, y;
    DynForest::EdgeId h{};
    bool alive = false;
  };

  bool static_part(uint32_t v) const { return act_[v] && q0idx_[v] < 0; }
  bool endpoint_active(uint32_t fv) const {
    return fv >= nq_ ? true : act_[q0_[fv]] != 0;
  }
  // Forest stand-in for a query endpoint: q0 members stand for themselves; a
  // static vertex is replaced by an active q0 neighbor of its component, or
  // by the component's own (then isolated) forest vertex if none exists.
  uint32_t rep(uint32_t u) const {
    assert(u < g_.n && act_[u]);
    int32_t l = q0idx_[u];
    if (l >= 0) return static_cast<uint32_t>(l);
    int32_t j = comp_of_[u];
    assert(j >= 0);
    for (uint32_t l2 : comp_adj_[j])
      if (act_[q0_[l2]]) return l2;
    return nq_ + static_cast<uint32_t>(j);
  }
  void add_slot(uint32_t x, uint32_t y) {
    uint32_t idx = static_cast<uint32_t>(pedges_.size());
    pedges_.push_back(PEdge{x, y, {}, false});
    if (x < nq_) inc_[x].push_back(idx);
    if (y < nq_) inc_[y].push_back(idx);
  }
  void elink(PEdge& pe) {
    pe.h = forest_.link(pe.x, pe.y);
    pe.alive = true;
    if (cnt_) ++cnt_->gstar_edge_updates;
  }
  void ecut(PEdge& pe) {
    forest_.cut_quiet(pe.h);
    pe.alive = false;
    if (cnt_) ++cnt_->gstar_edge_updates;
  }

  const BaseGraph& g_;
  std::vector<char>& act_;
  const std::vector<uint32_t>& q0_;
  Counters* cnt_;
  uint32_t nq_ = 0, k_ = 0;
  std::vector<int32_t> q0idx_, comp_of_;
  std::vector<std::vector<uint32_t>> member_comps_, comp_adj_, inc_;
  std::vector<PEdge> pedges_;
  DynForest forest_;
};

void check_explicit(const OfflineConfig& cfg) {
  if ((cfg.delta && *cfg.delta == 0) || (cfg.q && *cfg.q == 0) ||
      (cfg.t && *cfg.t == 0))
    throw ConfigError("offline delta, q, t must be positive");
}

}  // namespace

std::vector<bool> run_offline_subgraph(const BaseGraph& g,
                                       const std::vector<TraceEvent>& events,
                                       const OfflineConfig& cfg,
                                       Counters* counters,
                                       std::vector<OfflinePhaseStats>* stats) {
  check_explicit(cfg);

  // Rewrite edge updates as vertex updates: each inserted edge becomes a
  // fresh helper vertex adjacent to both endpoints, and the edge exists
  // exactly while its helper is on.
  BaseGraph ga = g;
  std::vector<char> act(ga.n, 0);
  struct Ev {
    uint8_t k;  // 0 on, 1 off, 2 conn
    uint32_t u, v;
  };
  std::vector<Ev> evs;
  evs.reserve(events.size());
  std::map<int64_t, uint32_t> live_handle;
  for (const TraceEvent& e : events) {
    switch (e.kind) {
      case EventKind::On:
        assert(e.u < g.n);
        evs.push_back({0, e.u, 0});
        break;
      case EventKind::Off:
        assert(e.u < g.n);
        evs.push_back({1, e.u, 0});
        break;
      case EventKind::Conn:
        assert(e.u < g.n && e.v < g.n);
        evs.push_back({2, e.u, e.v});
        break;
      case EventKind::AddE: {
        assert(e.u < g.n && e.v < g.n && !live_handle.count(e.handle));
        uint32_t z = ga.n;
        ga.add_vertex();
        act.push_back(0);
        ga.add_edge(e.u, z);
        ga.add_edge(z, e.v);
        live_handle[e.handle] = z;
        evs.push_back({0, z, 0});
        break;
      }
      case EventKind::DelE: {
        auto it = live_handle.find(e.handle);
        assert(it != live_handle.end());
        evs.push_back({1, it->second, 0});
        live_handle.erase(it);
        break;
      }
      default:
        assert(false);
    }
  }

  SubgraphParams base = classic_params(ga.m());
  uint64_t delta = cfg.delta.value_or(base.delta);
  uint64_t qlen =
      cfg.q.value_or(cfg.delta ? degree_params(ga.m(), delta).q : base.q);
  uint64_t t = cfg.t.value_or(std::max<uint64_t>(1, pow_ceil(delta, 1, 2)));

  // High classification: the delta largest degrees, ties to smaller ids.
  std::vector<uint32_t> high;
  for (uint32_t v = 0; v < ga.n; ++v)
    if (ga.deg(v) >= 1) high.push_back(v);
  std::sort(high.begin(), high.end(), [&](uint32_t x, uint32_t y) {
    if (ga.deg(x) != ga.deg(y)) return ga.deg(x) > ga.deg(y);
    return x < y;
  });
  high.resize(std::min<size_t>(high.size(), delta));
  std::sort(high.begin(), high.end());
  std::vector<char> ishigh(ga.n, 0);
  for (uint32_t h : high) ishigh[h] = 1;

  std::vector<bool> answers;
  uint64_t phase = 0;
  size_t i = 0;
  while (i < evs.size()) {
    // Window: the next qlen low-vertex updates plus everything between them.
    std::vector<uint32_t> q0 = high;
    std::vector<char> inq0 = ishigh;
    size_t j = i;
    uint64_t lows = 0;
    while (j < evs.size()) {
      const Ev& e = evs[j];
      if (e.k <= 1 && !ishigh[e.u]) {
        if (lows == qlen) break;
        ++lows;
        if (!inq0[e.u]) {
          inq0[e.u] = 1;
          q0.push_back(e.u);
        }
      }
      ++j;
    }
    std::sort(q0.begin(), q0.end());

    OfflinePhaseStats st;
    st.phase = phase;
    PhaseEngine eng(ga, act, high, q0, t, cfg.audit, counters,
                    stats ? &st : nullptr);
    for (; i < j; ++i) {
      const Ev& e = evs[i];
      if (e.k == 0)
        eng.turn_on(e.u);
      else if (e.k == 1)
        eng.turn_off(e.u);
      else
        answers.push_back(eng.query(e.u, e.v));
    }
    if (stats) stats->push_back(st);
    ++phase;
  }
  return answers;
}

std::vector<bool> run_offline_geom(const std::vector<TraceEvent>& events,
                                   ProviderKind provider,
                                   const OfflineConfig& cfg, Counters* counters,
                                   std::vector<OfflinePhaseStats>* stats) {
  if (!(Rational(0) < cfg.b && cfg.b <= Rational(1)))
    throw ConfigError("offline geometric b must be in (0, 1]");
  if (!(Rational(0) < cfg.alpha && cfg.alpha < Rational(1)))
    throw ConfigError("offline geometric alpha must be in (0, 1)");
  check_explicit(cfg);

  // Ids may be reused after deletion, so every insertion gets its own slot
  // and events are rewritten over slots.
  std::vector<GeomObject> objs;
  struct Ev {
    uint8_t k;  // 0 insert, 1 delete, 2 conn
    uint32_t a, b;
  };
  std::vector<Ev> evs;
  evs.reserve(events.size());
  std::map<int64_t, uint32_t> live_id;
  for (const TraceEvent& e : events) {
    switch (e.kind) {
      case EventKind::Insert: {
        assert(!live_id.count(e.id));
        uint32_t oid = static_cast<uint32_t>(objs.size());
        GeomObject o;
        o.id = static_cast<int64_t>(oid);
        o.lo = e.lo;
        o.hi = e.hi;
        assert(o.valid());
        objs.push_back(std::move(o));
        live_id[e.id] = oid;
        evs.push_back({0, oid, 0});
        break;
      }
      case EventKind::Delete: {
        auto it = live_id.find(e.id);
        assert(it != live_id.end());
        evs.push_back({1, it->second, 0});
        live_id.erase(it);
        break;
      }
      case EventKind::GConn: {
        auto i1 = live_id.find(e.id);
        auto i2 = live_id.find(e.id2);
        assert(i1 != live_id.end() && i2 != live_id.end());
        evs.push_back({2, i1->second, i2->second});
        break;
      }
      default:
        assert(false);
    }
  }
  if (evs.empty()) return {};
  const uint32_t nobj = static_cast<uint32_t>(objs.size());
  for (const GeomObject& o : objs) assert(o.dim() == objs[0].dim());

  std::vector<char> live(nobj, 0);
  std::vector<int32_t> lv(nobj, -1);  // slot -> phase vertex, scratch
  std::vector<char> iny0(nobj, 0);    // scratch
  std::vector<bool> answers;
  uint64_t phase = 0;
  size_t i = 0;
  while (i < evs.size()) {
    uint64_t live_cnt = 0;
    for (char c : live) live_cnt += c;
    OfflineGeomParams gp =
        offline_geom_params(std::max<uint64_t>(live_cnt, 1), cfg.b, cfg.alpha);
    uint64_t delta = cfg.delta.value_or(gp.delta);
    uint64_t qlen = cfg.q.value_or(gp.q);
    uint64_t t = cfg.t.value_or(gp.t);

    // Window: the next qlen object updates plus any queries between them.
    std::vector<uint32_t> y0;
    size_t j = i;
    uint64_t ups = 0;
    while (j < evs.size()) {
      const Ev& e = evs[j];
      if (e.k <= 1) {
        if (ups == qlen) break;
        ++ups;
        if (!iny0[e.a]) {
          iny0[e.a] = 1;
          y0.push_back(e.a);
        }
      }
      ++j;
    }
    std::sort(y0.begin(), y0.end());
    std::vector<uint32_t> xs;  // live now, untouched this window
    for (uint32_t o = 0; o < nobj; ++o)
      if (live[o] && !iny0[o]) xs.push_back(o);
    std::vector<uint32_t> dom(xs.size() + y0.size());
    std::merge(xs.begin(), xs.end(), y0.begin(), y0.end(), dom.begin());
    const uint32_t nd = static_cast<uint32_t>(dom.size());
    for (uint32_t idx = 0; idx < nd; ++idx)
      lv[dom[idx]] = static_cast<int32_t>(idx);

    std::vector<GeomObject> cobjs;
    cobjs.reserve(nd);
    for (uint32_t o : dom) cobjs.push_back(objs[o]);
    CanonicalCollection coll = build_collection(provider, cobjs);

    // Components of the static objects, via the path-record machinery.
    std::vector<int32_t> comp_of(nd, -1);
    uint32_t ncomp = 0;
    if (!xs.empty()) {
      BlockState bs(provider, counters);
      std::vector<GeomObject> block;
      block.reserve(xs.size());
      for (uint32_t o : xs) block.push_back(objs[o]);
      bs.insert_block(block);
      for (const auto& grp : bs.partition()) {
        for (int64_t so : grp)
          comp_of[lv[static_cast<uint32_t>(so)]] = static_cast<int32_t>(ncomp);
        ++ncomp;
      }
    }

    // Subsets larger than nd/delta become vertices (the only high ones);
    // smaller ones are expanded into direct edges per updated object.
    const uint32_t nsub = coll.subset_count();
    std::vector<int32_t> bigof(nsub, -1);
    std::vector<uint32_t> bigs;
    for (uint32_t sid = 0; sid < nsub; ++sid)
      if (static_cast<uint64_t>(coll.subset_size(sid)) * delta > nd) {
        bigof[sid] = static_cast<int32_t>(bigs.size());
        bigs.push_back(sid);
      }

    const uint32_t base_comp = nd, base_big = nd + ncomp;
    BaseGraph gg =
        BaseGraph::make(base_big + static_cast<uint32_t>(bigs.size()));
    for (uint32_t o : xs)
      gg.add_edge(static_cast<uint32_t>(lv[o]),
                  base_comp + static_cast<uint32_t>(comp_of[lv[o]]));
    std::vector<uint32_t> asg_cnt(bigs.size(), 0), mem_cnt(bigs.size(), 0);
    std::vector<std::vector<uint32_t>> mem_bigs(nd), asg_bigs(nd);
    for (uint32_t bi = 0; bi < bigs.size(); ++bi)
      for (int64_t so : coll.subset_members(bigs[bi])) {
        uint32_t o = static_cast<uint32_t>(so);
        uint32_t di = static_cast<uint32_t>(lv[o]);
        gg.add_edge(base_big + bi, di);
        if (live[o]) ++mem_cnt[bi];
        if (iny0[o]) mem_bigs[di].push_back(bi);
      }
    for (uint32_t o : y0) {
      uint32_t di = static_cast<uint32_t>(lv[o]);
      for (uint32_t sid : coll.query(objs[o])) {
        if (bigof[sid] >= 0) {
          uint32_t bi = static_cast<uint32_t>(bigof[sid]);
          gg.add_edge(di, base_big + bi);
          asg_bigs[di].push_back(bi);
        } else {
          for (int64_t so : coll.subset_members(sid)) {
            uint32_t dj = static_cast<uint32_t>(lv[static_cast<uint32_t>(so)]);
            if (dj != di) gg.add_edge(di, dj);
          }
        }
      }
    }

    std::vector<char> actg(gg.n, 0);
    for (uint32_t o : xs) actg[lv[o]] = 1;
    for (uint32_t ci = 0; ci < ncomp; ++ci) actg[base_comp + ci] = 1;
    for (uint32_t o : y0)
      if (live[o]) {
        actg[lv[o]] = 1;
        for (uint32_t bi : asg_bigs[lv[o]]) ++asg_cnt[bi];
      }
    // A subset vertex is on exactly while it has a live assignor and a live
    // member; either side alone has no witness object connecting the other.
    for (uint32_t bi = 0; bi < bigs.size(); ++bi)
      actg[base_big + bi] = asg_cnt[bi] > 0 && mem_cnt[bi] > 0;

    std::vector<uint32_t> highg, q0g;
    for (uint32_t bi = 0; bi < bigs.size(); ++bi)
      highg.push_back(base_big + bi);
    for (uint32_t o : y0) q0g.push_back(static_cast<uint32_t>(lv[o]));
    q0g.insert(q0g.end(), highg.begin(), highg.end());

    OfflinePhaseStats st;
    st.phase = phase;
    PhaseEngine eng(gg, actg, highg, q0g, t, cfg.audit, counters,
                    stats ? &st : nullptr);
    auto sync_big = [&](uint32_t bi) {
      bool want = asg_cnt[bi] > 0 && mem_cnt[bi] > 0;
      uint32_t sv = base_big + bi;
      if (want && !actg[sv])
        eng.turn_on(sv);
      else if (!want && actg[sv])
        eng.turn_off(sv);
    };
    for (; i < j; ++i) {
      const Ev& e = evs[i];
      if (e.k == 2) {
        answers.push_back(eng.query(static_cast<uint32_t>(lv[e.a]),
                                    static_cast<uint32_t>(lv[e.b])));
        continue;
      }
      uint32_t di = static_cast<uint32_t>(lv[e.a]);
      if (e.k == 0) {
        assert(!live[e.a]);
        live[e.a] = 1;
        eng.turn_on(di);
        for (uint32_t bi : asg_bigs[di]) ++asg_cnt[bi];
        for (uint32_t bi : mem_bigs[di]) ++mem_cnt[bi];
        for (uint32_t bi : asg_bigs[di]) sync_big(bi);
        for (uint32_t bi : mem_bigs[di]) sync_big(bi);
      } else {
        assert(live[e.a]);
        live[e.a] = 0;
        for (uint32_t bi : asg_bigs[di]) --asg_cnt[bi];
        for (uint32_t bi : mem_bigs[di]) --mem_cnt[bi];
        for (uint32_t bi : asg_bigs[di]) sync_big(bi);
        for (uint32_t bi : mem_bigs[di]) sync_big(bi);
        eng.turn_off(di);
      }
    }

    for (uint32_t o : dom) lv[o] = -1;
    for (uint32_t o : y0) iny0[o] = 0;
    if (stats) stats->push_back(st);
    ++phase;
  }
  return answers;
}

}  // namespace dyncon
