#include "dyncon/core.hpp"

#include <cassert>
#include <istream>
#include <sstream>

#include "dyncon/scan.hpp"

namespace dyncon {

void BaseGraph::add_edge(VertexId u, VertexId v) {
  assert(u < n && v < n);
  uint32_t e = static_cast<uint32_t>(edges.size());
  edges.emplace_back(u, v);
  adj[u].push_back({v, e});
  adj[v].push_back({u, e});  // self-loop: two entries in the same list
}

BaseGraph load_graph(std::istream& in) {
  using detail::parse_uint;
  using detail::tokenize;

  BaseGraph g;
  bool have_header = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (!have_header) {
      if (tok[0] != "graph")
        throw ParseError(line, "expected 'graph <n>' header, got '" + tok[0] + "'");
      if (tok.size() != 2) throw ParseError(line, "'graph' takes one argument");
      g = BaseGraph::make(static_cast<uint32_t>(parse_uint(tok[1], line, "n")));
      have_header = true;
      continue;
    }
    if (tok[0] != "edge")
      throw ParseError(line, "expected 'edge <u> <v>', got '" + tok[0] + "'");
    if (tok.size() != 3) throw ParseError(line, "'edge' takes two arguments");
    uint64_t u = parse_uint(tok[1], line, "u");
    uint64_t v = parse_uint(tok[2], line, "v");
    if (u >= g.n || v >= g.n)
      throw ParseError(line, "edge endpoint out of range [0, " +
                                 std::to_string(g.n) + ")");
    g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v));
  }
  if (!have_header) throw ParseError(line ? line : 1, "missing 'graph <n>' header");
  return g;
}

std::string serialize_graph(const BaseGraph& g) {
  std::ostringstream os;
  os << "graph " << g.n << "\n";
  for (const auto& [u, v] : g.edges) os << "edge " << u << " " << v << "\n";
  return os.str();
}

}  // namespace dyncon
