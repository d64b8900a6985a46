#include "dyncon/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <queue>

namespace dyncon {

static std::vector<std::vector<VertexId>> active_adj(
    const BaseGraph& g, const std::vector<char>& active,
    const std::vector<std::pair<VertexId, VertexId>>& extra) {
  assert(active.size() >= g.n);
  std::vector<std::vector<VertexId>> adj(g.n);
  for (const auto& [u, v] : g.edges)
    if (active[u] && active[v] && u != v) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  for (const auto& [u, v] : extra)
    if (active[u] && active[v] && u != v) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  return adj;
}

bool oracle_connected_subgraph(
    const BaseGraph& g, const std::vector<char>& active, VertexId u, VertexId v,
    const std::vector<std::pair<VertexId, VertexId>>& extra) {
  assert(u < g.n && v < g.n && active[u] && active[v]);
  if (u == v) return true;
  auto adj = active_adj(g, active, extra);
  std::vector<char> seen(g.n, 0);
  std::queue<VertexId> bfs;
  bfs.push(u);
  seen[u] = 1;
  while (!bfs.empty()) {
    VertexId x = bfs.front();
    bfs.pop();
    if (x == v) return true;
    for (VertexId y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        bfs.push(y);
      }
  }
  return false;
}

namespace {
struct Dsu {
  std::vector<uint32_t> p;
  explicit Dsu(uint32_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  uint32_t find(uint32_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(uint32_t a, uint32_t b) { p[find(a)] = find(b); }
};
}  // namespace

bool oracle_connected_subgraph_uf(
    const BaseGraph& g, const std::vector<char>& active, VertexId u, VertexId v,
    const std::vector<std::pair<VertexId, VertexId>>& extra) {
  assert(u < g.n && v < g.n && active[u] && active[v]);
  Dsu d(g.n);
  for (const auto& [a, b] : g.edges)
    if (active[a] && active[b]) d.unite(a, b);
  for (const auto& [a, b] : extra)
    if (active[a] && active[b]) d.unite(a, b);
  return d.find(u) == d.find(v);
}

std::vector<uint32_t> oracle_partition_subgraph(
    const BaseGraph& g, const std::vector<char>& active,
    const std::vector<std::pair<VertexId, VertexId>>& extra) {
  Dsu d(g.n);
  for (const auto& [a, b] : g.edges)
    if (active[a] && active[b]) d.unite(a, b);
  for (const auto& [a, b] : extra)
    if (active[a] && active[b]) d.unite(a, b);
  std::vector<uint32_t> label(g.n, UINT32_MAX);
  for (VertexId v = 0; v < g.n; ++v)
    if (active[v]) {
      uint32_t r = d.find(v);
      if (label[r] == UINT32_MAX) label[r] = v;  // first = smallest id
    }
  std::vector<uint32_t> out(g.n, UINT32_MAX);
  for (VertexId v = 0; v < g.n; ++v)
    if (active[v]) out[v] = label[d.find(v)];
  return out;
}

bool oracle_intersects(const GeomObject& a, const GeomObject& b) {
  return intersects(a, b);
}

std::vector<std::vector<int64_t>> oracle_components_geom(
    const std::vector<GeomObject>& objects) {
  size_t n = objects.size();
  std::vector<int32_t> comp(n, -1);
  std::vector<std::vector<int64_t>> out;
  for (size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int32_t c = static_cast<int32_t>(out.size());
    out.emplace_back();
    std::queue<size_t> bfs;
    bfs.push(s);
    comp[s] = c;
    while (!bfs.empty()) {
      size_t x = bfs.front();
      bfs.pop();
      out[c].push_back(objects[x].id);
      for (size_t y = 0; y < n; ++y)
        if (comp[y] < 0 && intersects(objects[x], objects[y])) {
          comp[y] = c;
          bfs.push(y);
        }
    }
  }
  for (auto& grp : out) std::sort(grp.begin(), grp.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool oracle_connected_geom(const std::vector<GeomObject>& objects, int64_t id1,
                           int64_t id2) {
  auto comps = oracle_components_geom(objects);
  for (const auto& grp : comps) {
    bool h1 = std::binary_search(grp.begin(), grp.end(), id1);
    bool h2 = std::binary_search(grp.begin(), grp.end(), id2);
    if (h1 || h2) return h1 && h2;
  }
  return false;
}

}  // namespace dyncon
