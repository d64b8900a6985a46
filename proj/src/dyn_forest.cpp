#include "dyncon/dyn_forest.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <unordered_map>

#include "dyncon/rng.hpp"

namespace dyncon {

namespace {

struct EdgeRec;

// One treap node: either a vertex occurrence (vnode) or a directed arc of a
// tree edge.  Every level's tour has its own nodes.
struct Node {
  Node* parent = nullptr;
  Node* left = nullptr;
  Node* right = nullptr;
  uint64_t prio = 0;

  EdgeRec* erec = nullptr;  // null for vnodes
  VertexId vid = 0;         // vnode only
  int64_t w = 0;            // vnode at level 0 only

  bool at_level = false;     // arc: edge level equals this tour's level
  bool adj_nonempty = false;  // vnode: nontree list here is nonempty
  EdgeRec* adj_head = nullptr;

  // Subtree aggregates.
  uint32_t sz = 1;
  uint32_t cnt = 0;       // vnodes below (incl. self)
  int64_t wsum = 0;
  VertexId min_vid = UINT32_MAX;
  bool has_level = false;
  bool has_adj = false;

  bool is_vnode() const { return erec == nullptr; }
};

struct EdgeRec {
  VertexId u = 0, v = 0;
  int level = 0;
  bool is_tree = false;
  bool self_loop = false;
  bool alive = false;
  uint32_t slot = 0;
  // arcs[i] = {arc u->v, arc v->u} in the level-i tour; size level+1 if tree.
  std::vector<std::array<Node*, 2>> arcs;
  // Intrusive nontree adjacency links, one chain per endpoint side.
  EdgeRec* nxt[2] = {nullptr, nullptr};
  EdgeRec* prv[2] = {nullptr, nullptr};
};

}  // namespace

struct DynForest::Impl {
  struct Vert {
    int64_t w = 0;
    std::vector<Node*> vn;  // per level, null gaps
  };

  std::vector<Vert> verts;
  std::vector<EdgeRec*> slots;
  std::vector<uint32_t> gens;
  std::vector<uint32_t> free_slots;
  SplitMix64 prio_rng{0x9e3779b97f4a7c15ull};
  uint64_t version = 0;
  uint64_t rotations = 0;
  int max_level = 0;

  ~Impl() {
    for (auto& vt : verts)
      for (Node* nd : vt.vn) delete nd;
    for (EdgeRec* e : slots)
      if (e) {
        if (e->is_tree)
          for (auto& pr : e->arcs) {
            delete pr[0];
            delete pr[1];
          }
        delete e;
      }
  }

  // ---- treap primitives ----

  static uint32_t nsz(const Node* n) { return n ? n->sz : 0; }

  void pull(Node* x) {
    x->sz = 1 + nsz(x->left) + nsz(x->right);
    bool isv = x->is_vnode();
    x->cnt = (isv ? 1u : 0u) + (x->left ? x->left->cnt : 0) +
             (x->right ? x->right->cnt : 0);
    x->wsum = (isv ? x->w : 0) + (x->left ? x->left->wsum : 0) +
              (x->right ? x->right->wsum : 0);
    x->min_vid = isv ? x->vid : UINT32_MAX;
    x->has_level = !isv && x->at_level;
    x->has_adj = isv && x->adj_nonempty;
    for (Node* c : {x->left, x->right})
      if (c) {
        x->min_vid = std::min(x->min_vid, c->min_vid);
        x->has_level = x->has_level || c->has_level;
        x->has_adj = x->has_adj || c->has_adj;
      }
  }

  void pull_path(Node* x) {
    while (x) {
      pull(x);
      x = x->parent;
    }
  }

  static Node* root_of(Node* x) {
    while (x->parent) x = x->parent;
    return x;
  }
  static const Node* root_of(const Node* x) {
    while (x->parent) x = x->parent;
    return x;
  }

  Node* merge(Node* a, Node* b) {
    if (!a) return b;
    if (!b) return a;
    ++rotations;
    if (a->prio > b->prio) {
      Node* r = merge(a->right, b);
      a->right = r;
      r->parent = a;
      pull(a);
      return a;
    }
    Node* l = merge(a, b->left);
    b->left = l;
    l->parent = b;
    pull(b);
    return b;
  }

  // Splits x's tree into (everything before x, everything from x on).
  std::pair<Node*, Node*> split_before(Node* x) {
    Node* p = x->parent;
    bool was_left = p && p->left == x;
    if (p) (was_left ? p->left : p->right) = nullptr;
    x->parent = nullptr;
    Node* l = x->left;
    if (l) {
      l->parent = nullptr;
      x->left = nullptr;
    }
    pull(x);
    Node* rpart = x;
    Node* lpart = l;
    while (p) {
      ++rotations;
      Node* gp = p->parent;
      bool p_was_left = gp && gp->left == p;
      if (gp) (p_was_left ? gp->left : gp->right) = nullptr;
      p->parent = nullptr;
      if (was_left) {
        pull(p);  // p keeps its right subtree; goes after rpart
        rpart = merge(rpart, p);
      } else {
        pull(p);  // p keeps its left subtree; goes before lpart
        lpart = merge(p, lpart);
      }
      was_left = p_was_left;
      p = gp;
    }
    return {lpart, rpart};
  }

  // Splits x's tree into (everything through x, everything after x).
  std::pair<Node*, Node*> split_after(Node* x) {
    Node* p = x->parent;
    bool was_left = p && p->left == x;
    if (p) (was_left ? p->left : p->right) = nullptr;
    x->parent = nullptr;
    Node* r = x->right;
    if (r) {
      r->parent = nullptr;
      x->right = nullptr;
    }
    pull(x);
    Node* lpart = x;
    Node* rpart = r;
    while (p) {
      ++rotations;
      Node* gp = p->parent;
      bool p_was_left = gp && gp->left == p;
      if (gp) (p_was_left ? gp->left : gp->right) = nullptr;
      p->parent = nullptr;
      if (was_left) {
        pull(p);
        rpart = merge(rpart, p);
      } else {
        pull(p);
        lpart = merge(p, lpart);
      }
      was_left = p_was_left;
      p = gp;
    }
    return {lpart, rpart};
  }

  static uint64_t rank_of(const Node* x) {
    uint64_t r = nsz(x->left);
    const Node* cur = x;
    while (cur->parent) {
      const Node* p = cur->parent;
      if (p->right == cur) r += nsz(p->left) + 1;
      cur = p;
    }
    return r;
  }

  // ---- vnodes and adjacency lists ----

  Node* vnode(VertexId v, int lvl) const {
    const auto& vn = verts[v].vn;
    return lvl < static_cast<int>(vn.size()) ? vn[lvl] : nullptr;
  }

  Node* get_or_make_vnode(VertexId v, int lvl) {
    auto& vt = verts[v];
    if (lvl >= static_cast<int>(vt.vn.size())) vt.vn.resize(lvl + 1, nullptr);
    if (!vt.vn[lvl]) {
      Node* nd = new Node;
      nd->prio = prio_rng.next();
      nd->vid = v;
      if (lvl == 0) nd->w = vt.w;
      pull(nd);
      vt.vn[lvl] = nd;
      max_level = std::max(max_level, lvl);
    }
    return vt.vn[lvl];
  }

  static int side_of(const EdgeRec* e, VertexId v) {
    assert(e->u == v || e->v == v);
    return e->u == v ? 0 : 1;
  }

  void adj_insert(EdgeRec* e, VertexId v, int lvl) {
    Node* nd = get_or_make_vnode(v, lvl);
    int s = side_of(e, v);
    e->nxt[s] = nd->adj_head;
    e->prv[s] = nullptr;
    if (nd->adj_head) nd->adj_head->prv[side_of(nd->adj_head, v)] = e;
    nd->adj_head = e;
    if (!nd->adj_nonempty) {
      nd->adj_nonempty = true;
      pull_path(nd);
    }
  }

  void adj_remove(EdgeRec* e, VertexId v, int lvl) {
    Node* nd = vnode(v, lvl);
    assert(nd);
    int s = side_of(e, v);
    EdgeRec* pe = e->prv[s];
    EdgeRec* ne = e->nxt[s];
    if (pe)
      pe->nxt[side_of(pe, v)] = ne;
    else
      nd->adj_head = ne;
    if (ne) ne->prv[side_of(ne, v)] = pe;
    e->nxt[s] = e->prv[s] = nullptr;
    if (!nd->adj_head && nd->adj_nonempty) {
      nd->adj_nonempty = false;
      pull_path(nd);
    }
  }

  // ---- tour surgery ----

  // Rotates v's tour so it starts at v's vnode; returns the new root.
  Node* reroot(VertexId v, int lvl) {
    Node* nd = get_or_make_vnode(v, lvl);
    auto [a, b] = split_before(nd);
    return merge(b, a);
  }

  // Joins the level-lvl tours of u and v with a fresh arc pair for e.
  void link_tour(EdgeRec* e, int lvl) {
    Node* a1 = new Node;
    Node* a2 = new Node;
    for (Node* nd : {a1, a2}) {
      nd->prio = prio_rng.next();
      nd->erec = e;
      nd->at_level = (e->level == lvl);
      pull(nd);
    }
    if (static_cast<int>(e->arcs.size()) <= lvl) e->arcs.resize(lvl + 1);
    e->arcs[lvl] = {a1, a2};
    Node* tu = reroot(e->u, lvl);
    Node* tv = reroot(e->v, lvl);
    merge(merge(merge(tu, a1), tv), a2);
  }

  // Removes e's arc pair from the level-lvl tour.  Returns {side of v-ish
  // endpoint (the subtree between the arcs), side of the other endpoint,
  // vertex id living in the first side}.
  struct CutSides {
    Node* inner_root;
    Node* outer_root;
    VertexId inner_vertex;
  };
  CutSides cut_tour(EdgeRec* e, int lvl) {
    Node* a1 = e->arcs[lvl][0];  // u->v
    Node* a2 = e->arcs[lvl][1];  // v->u
    VertexId inner_v = e->v;
    if (rank_of(a1) > rank_of(a2)) {
      std::swap(a1, a2);
      inner_v = e->u;
    }
    // tour = A ++ [a1] ++ M ++ [a2] ++ C, with M = inner_v's subtree
    auto [pre, from1] = split_before(a1);
    auto [a1_only, tail1] = split_after(a1);
    assert(a1_only == a1 && a1->sz == 1);
    (void)from1;
    (void)a1_only;
    (void)tail1;
    auto [m, from2] = split_before(a2);
    auto [a2_only, post] = split_after(a2);
    assert(a2_only == a2 && a2->sz == 1);
    assert(m && m->cnt >= 1);
    (void)from2;
    (void)a2_only;
    Node* outer = merge(pre, post);
    assert(outer && outer->cnt >= 1);
    delete a1;
    delete a2;
    e->arcs[lvl] = {nullptr, nullptr};
    return {m, outer, inner_v};
  }

  // ---- edge bookkeeping ----

  uint32_t alloc_slot(EdgeRec* e) {
    uint32_t s;
    if (!free_slots.empty()) {
      s = free_slots.back();
      free_slots.pop_back();
      slots[s] = e;
    } else {
      s = static_cast<uint32_t>(slots.size());
      slots.push_back(e);
      gens.push_back(0);
    }
    e->slot = s;
    return s;
  }

  void free_slot(EdgeRec* e) {
    slots[e->slot] = nullptr;
    ++gens[e->slot];
    free_slots.push_back(e->slot);
    delete e;
  }

  EdgeRec* rec_of(EdgeId id) const {
    if (id.slot >= slots.size()) return nullptr;
    if (gens[id.slot] != id.gen) return nullptr;
    return slots[id.slot];
  }

  // ---- replacement search ----

  Node* find_at_level(Node* root) {
    Node* x = root;
    while (x) {
      if (!x->is_vnode() && x->at_level) return x;
      if (x->left && x->left->has_level)
        x = x->left;
      else if (x->right && x->right->has_level)
        x = x->right;
      else
        return nullptr;
    }
    return nullptr;
  }

  Node* find_adj(Node* root) {
    Node* x = root;
    while (x) {
      if (x->is_vnode() && x->adj_nonempty) return x;
      if (x->left && x->left->has_adj)
        x = x->left;
      else if (x->right && x->right->has_adj)
        x = x->right;
      else
        return nullptr;
    }
    return nullptr;
  }

  struct LevelSides {
    Node* inner;
    Node* outer;
  };

  // Removes tree edge e and reconnects through a replacement if one exists.
  // Returns the level-0 sides if the component split, else nulls.
  LevelSides remove_tree_edge(EdgeRec* e) {
    int lvl = e->level;
    std::vector<CutSides> sides(lvl + 1);
    for (int i = 0; i <= lvl; ++i) sides[i] = cut_tour(e, i);

    for (int i = lvl; i >= 0; --i) {
      Node* s_inner = sides[i].inner_root;
      Node* s_outer = sides[i].outer_root;
      // Smaller side by vertex count, ties by min vertex id.
      Node* small = s_inner;
      Node* large = s_outer;
      if (small->cnt > large->cnt ||
          (small->cnt == large->cnt && small->min_vid > large->min_vid))
        std::swap(small, large);

      // Promote the smaller side's level-i tree edges to level i+1.
      while (small->has_level) {
        Node* arc = find_at_level(small);
        assert(arc);
        EdgeRec* f = arc->erec;
        assert(f->is_tree && f->level == i);
        f->level = i + 1;
        for (Node* a : f->arcs[i]) {
          a->at_level = false;
          pull_path(a);
        }
        link_tour(f, i + 1);
        small = root_of(small);
        large = root_of(large);  // unchanged, defensive
      }

      // Scan the smaller side's level-i nontree edges.
      while (small->has_adj) {
        Node* vn = find_adj(small);
        assert(vn);
        EdgeRec* f = vn->adj_head;
        VertexId z = vn->vid;
        VertexId o = f->u == z ? f->v : f->u;
        Node* ovn = vnode(o, i);
        assert(ovn);
        if (root_of(ovn) == large) {
          // Replacement: f becomes a tree edge at level i, reconnecting the
          // two sides in every tour from 0 through i.
          adj_remove(f, f->u, i);
          adj_remove(f, f->v, i);
          f->is_tree = true;
          f->arcs.assign(i + 1, {nullptr, nullptr});
          for (int j = 0; j <= i; ++j) link_tour(f, j);
          return {nullptr, nullptr};
        }
        // Both endpoints in the smaller side: promote to level i+1.
        adj_remove(f, f->u, i);
        adj_remove(f, f->v, i);
        f->level = i + 1;
        adj_insert(f, f->u, i + 1);
        adj_insert(f, f->v, i + 1);
        small = root_of(small);
      }
    }
    Node* r0a = root_of(sides[0].inner_root);
    Node* r0b = root_of(sides[0].outer_root);
    return {r0a, r0b};
  }

  void collect_vids(const Node* x, std::vector<VertexId>& out) const {
    if (!x) return;
    collect_vids(x->left, out);
    if (x->is_vnode()) out.push_back(x->vid);
    collect_vids(x->right, out);
  }
};

DynForest::DynForest() : impl_(new Impl) {}
DynForest::~DynForest() { delete impl_; }
DynForest::DynForest(DynForest&& o) noexcept : impl_(o.impl_) { o.impl_ = nullptr; }
DynForest& DynForest::operator=(DynForest&& o) noexcept {
  if (this != &o) {
    delete impl_;
    impl_ = o.impl_;
    o.impl_ = nullptr;
  }
  return *this;
}

VertexId DynForest::add_vertex(int64_t weight) {
  auto& im = *impl_;
  VertexId v = static_cast<VertexId>(im.verts.size());
  im.verts.push_back({weight, {}});
  im.get_or_make_vnode(v, 0);
  ++im.version;
  return v;
}

uint32_t DynForest::n_vertices() const {
  return static_cast<uint32_t>(impl_->verts.size());
}

DynForest::EdgeId DynForest::link(VertexId u, VertexId v) {
  auto& im = *impl_;
  assert(u < im.verts.size() && v < im.verts.size());
  EdgeRec* e = new EdgeRec;
  e->u = u;
  e->v = v;
  e->level = 0;
  e->alive = true;
  uint32_t slot = im.alloc_slot(e);
  if (u == v) {
    e->self_loop = true;  // inert: never tree, never in adjacency lists
  } else if (connected(u, v)) {
    im.adj_insert(e, u, 0);
    im.adj_insert(e, v, 0);
  } else {
    e->is_tree = true;
    im.link_tour(e, 0);
  }
  ++im.version;
  return {slot, im.gens[slot]};
}

DynForest::SplitReport DynForest::cut(EdgeId id) {
  auto& im = *impl_;
  EdgeRec* e = im.rec_of(id);
  assert(e && e->alive);
  SplitReport rep;
  if (e->self_loop) {
    im.free_slot(e);
    ++im.version;
    return rep;
  }
  if (!e->is_tree) {
    im.adj_remove(e, e->u, e->level);
    im.adj_remove(e, e->v, e->level);
    im.free_slot(e);
    ++im.version;
    return rep;
  }
  auto sides = im.remove_tree_edge(e);
  im.free_slot(e);
  ++im.version;
  if (sides.inner) {
    rep.split = true;
    Node* a = sides.inner;
    Node* b = sides.outer;
    Node* small = a;
    if (a->cnt > b->cnt || (a->cnt == b->cnt && a->min_vid > b->min_vid))
      small = b;
    im.collect_vids(small, rep.smaller);
    std::sort(rep.smaller.begin(), rep.smaller.end());
  }
  return rep;
}

bool DynForest::cut_quiet(EdgeId id) {
  auto& im = *impl_;
  EdgeRec* e = im.rec_of(id);
  assert(e && e->alive);
  if (e->self_loop) {
    im.free_slot(e);
    ++im.version;
    return false;
  }
  if (!e->is_tree) {
    im.adj_remove(e, e->u, e->level);
    im.adj_remove(e, e->v, e->level);
    im.free_slot(e);
    ++im.version;
    return false;
  }
  auto sides = im.remove_tree_edge(e);
  im.free_slot(e);
  ++im.version;
  return sides.inner != nullptr;
}

bool DynForest::connected(VertexId u, VertexId v) const {
  auto& im = *impl_;
  assert(u < im.verts.size() && v < im.verts.size());
  if (u == v) return true;
  return Impl::root_of(im.verts[u].vn[0]) == Impl::root_of(im.verts[v].vn[0]);
}

bool DynForest::edge_alive(EdgeId id) const { return impl_->rec_of(id) != nullptr; }

DynForest::ComponentHandle DynForest::component_of(VertexId v) const {
  auto& im = *impl_;
  assert(v < im.verts.size());
  const Node* r = Impl::root_of(im.verts[v].vn[0]);
  ComponentHandle h;
  h.root = r;
  h.version = im.version;
  h.size = r->cnt;
  h.weight = r->wsum;
  h.min_vid = r->min_vid;
  h.anchor = v;
  return h;
}

bool DynForest::same_component(const ComponentHandle& a, const ComponentHandle& b) {
  assert(a.version == b.version);
  return a.root == b.root;
}

std::vector<VertexId> DynForest::iter_component(VertexId v) const {
  auto& im = *impl_;
  std::vector<VertexId> out;
  im.collect_vids(Impl::root_of(im.verts[v].vn[0]), out);
  std::sort(out.begin(), out.end());
  return out;
}

void DynForest::set_weight(VertexId v, int64_t w) {
  auto& im = *impl_;
  im.verts[v].w = w;
  Node* nd = im.verts[v].vn[0];
  nd->w = w;
  im.pull_path(nd);
  ++im.version;
}

int64_t DynForest::weight_of(VertexId v) const { return impl_->verts[v].w; }

uint64_t DynForest::version() const { return impl_->version; }
uint64_t DynForest::rotations() const { return impl_->rotations; }

}  // namespace dyncon
