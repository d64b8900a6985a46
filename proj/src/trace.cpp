#include "dyncon/trace.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "dyncon/rng.hpp"
#include "dyncon/scan.hpp"

namespace dyncon {

namespace {

using detail::parse_int;
using detail::parse_uint;
using detail::tokenize;

void expect_arity(const std::vector<std::string>& tok, size_t want, int line) {
  if (tok.size() != want)
    throw ParseError(line, "'" + tok[0] + "' takes " +
                               std::to_string(want - 1) + " argument" +
                               (want == 2 ? "" : "s"));
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace t;
  bool have_header = false;
  bool events_started = false;
  std::vector<char> active;              // subgraph toggle state
  std::unordered_set<int64_t> handles;   // live dynamic-edge handles
  std::unordered_set<int64_t> live_ids;  // live geometric objects

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    const std::string& cmd = tok[0];

    if (!have_header) {
      if (cmd == "graph") {
        expect_arity(tok, 2, line);
        uint64_t n = parse_uint(tok[1], line, "n");
        if (n > UINT32_MAX)
          throw ParseError(line, "vertex count does not fit in 32 bits");
        t.mode = TraceMode::Subgraph;
        t.g = BaseGraph::make(static_cast<uint32_t>(n));
        active.assign(t.g.n, 0);
      } else if (cmd == "geom") {
        expect_arity(tok, 2, line);
        uint64_t d = parse_uint(tok[1], line, "d");
        if (d < 1 || d > 16)
          throw ParseError(line, "dimension must be in [1, 16]");
        t.mode = TraceMode::Geom;
        t.dim = static_cast<int>(d);
      } else {
        throw ParseError(line, "expected 'graph <n>' or 'geom <d>' header, got '" +
                                   cmd + "'");
      }
      have_header = true;
      continue;
    }

    TraceEvent ev;
    ev.line = line;

    if (t.mode == TraceMode::Subgraph) {
      auto vertex = [&](const std::string& s, const char* what) {
        uint64_t v = parse_uint(s, line, what);
        if (v >= t.g.n)
          throw ParseError(line, std::string(what) + " out of range [0, " +
                                     std::to_string(t.g.n) + ")");
        return static_cast<VertexId>(v);
      };
      if (cmd == "edge") {
        expect_arity(tok, 3, line);
        if (events_started)
          throw ParseError(line, "'edge' lines must precede all events");
        VertexId u = vertex(tok[1], "u"), v = vertex(tok[2], "v");
        if (u == v) throw ParseError(line, "self-loop edges are not supported");
        t.g.add_edge(u, v);
        continue;
      }
      if (cmd == "on" || cmd == "off") {
        expect_arity(tok, 2, line);
        VertexId v = vertex(tok[1], "v");
        bool want_on = cmd == "on";
        if (active[v] == static_cast<char>(want_on))
          throw ParseError(line, "vertex " + std::to_string(v) +
                                     " is already " + (want_on ? "on" : "off"));
        active[v] = static_cast<char>(want_on);
        ev.kind = want_on ? EventKind::On : EventKind::Off;
        ev.u = v;
      } else if (cmd == "conn") {
        expect_arity(tok, 3, line);
        ev.kind = EventKind::Conn;
        ev.u = vertex(tok[1], "u");
        ev.v = vertex(tok[2], "v");
        if (!active[ev.u] || !active[ev.v])
          throw ParseError(line, "'conn' endpoint " +
                                     std::to_string(active[ev.u] ? ev.v : ev.u) +
                                     " is off");
      } else if (cmd == "adde") {
        expect_arity(tok, 4, line);
        ev.kind = EventKind::AddE;
        ev.u = vertex(tok[1], "u");
        ev.v = vertex(tok[2], "v");
        if (ev.u == ev.v)
          throw ParseError(line, "self-loop edges are not supported");
        ev.handle = static_cast<int64_t>(parse_uint(tok[3], line, "handle"));
        if (!handles.insert(ev.handle).second)
          throw ParseError(line, "handle " + std::to_string(ev.handle) +
                                     " is already in use");
      } else if (cmd == "dele") {
        expect_arity(tok, 2, line);
        ev.kind = EventKind::DelE;
        ev.handle = static_cast<int64_t>(parse_uint(tok[1], line, "handle"));
        if (!handles.erase(ev.handle))
          throw ParseError(line, "handle " + std::to_string(ev.handle) +
                                     " is not in use");
      } else {
        throw ParseError(line, "unknown command '" + cmd + "'");
      }
    } else {
      auto object_id = [&](const std::string& s, const char* what) {
        return static_cast<int64_t>(parse_uint(s, line, what));
      };
      if (cmd == "insert") {
        size_t want = 4 + 2 * static_cast<size_t>(t.dim);
        if (tok.size() != want)
          throw ParseError(line, "'insert' takes " + std::to_string(want - 1) +
                                     " arguments in dimension " +
                                     std::to_string(t.dim));
        ev.kind = EventKind::Insert;
        ev.id = object_id(tok[1], "id");
        if (tok[2] != "box")
          throw ParseError(line, "expected 'box', got '" + tok[2] + "'");
        uint64_t d = parse_uint(tok[3], line, "d");
        if (static_cast<int>(d) != t.dim)
          throw ParseError(line, "box dimension " + std::to_string(d) +
                                     " does not match header dimension " +
                                     std::to_string(t.dim));
        for (int i = 0; i < t.dim; ++i) {
          int64_t lo = parse_int(tok[4 + 2 * i], line, "lo");
          int64_t hi = parse_int(tok[5 + 2 * i], line, "hi");
          if (lo > hi)
            throw ParseError(line, "empty box: lo > hi on axis " +
                                       std::to_string(i));
          ev.lo.push_back(lo);
          ev.hi.push_back(hi);
        }
        if (!live_ids.insert(ev.id).second)
          throw ParseError(line, "object " + std::to_string(ev.id) +
                                     " is already live");
      } else if (cmd == "delete") {
        expect_arity(tok, 2, line);
        ev.kind = EventKind::Delete;
        ev.id = object_id(tok[1], "id");
        if (!live_ids.erase(ev.id))
          throw ParseError(line, "object " + std::to_string(ev.id) +
                                     " is not live");
      } else if (cmd == "conn") {
        expect_arity(tok, 3, line);
        ev.kind = EventKind::GConn;
        ev.id = object_id(tok[1], "id1");
        ev.id2 = object_id(tok[2], "id2");
        if (!live_ids.count(ev.id))
          throw ParseError(line, "object " + std::to_string(ev.id) +
                                     " is not live");
        if (!live_ids.count(ev.id2))
          throw ParseError(line, "object " + std::to_string(ev.id2) +
                                     " is not live");
      } else {
        throw ParseError(line, "unknown command '" + cmd + "'");
      }
    }
    events_started = true;
    t.events.push_back(std::move(ev));
  }
  if (!have_header)
    throw ParseError(line ? line : 1, "missing 'graph <n>' or 'geom <d>' header");
  return t;
}

std::string serialize_trace(const Trace& t) {
  std::ostringstream os;
  if (t.mode == TraceMode::Subgraph) {
    os << serialize_graph(t.g);
    for (const auto& ev : t.events) switch (ev.kind) {
        case EventKind::On:
          os << "on " << ev.u << "\n";
          break;
        case EventKind::Off:
          os << "off " << ev.u << "\n";
          break;
        case EventKind::Conn:
          os << "conn " << ev.u << " " << ev.v << "\n";
          break;
        case EventKind::AddE:
          os << "adde " << ev.u << " " << ev.v << " " << ev.handle << "\n";
          break;
        case EventKind::DelE:
          os << "dele " << ev.handle << "\n";
          break;
        default:
          assert(!"geometric event in a subgraph trace");
      }
  } else {
    os << "geom " << t.dim << "\n";
    for (const auto& ev : t.events) switch (ev.kind) {
        case EventKind::Insert: {
          os << "insert " << ev.id << " box " << ev.lo.size();
          for (size_t i = 0; i < ev.lo.size(); ++i)
            os << " " << ev.lo[i] << " " << ev.hi[i];
          os << "\n";
          break;
        }
        case EventKind::Delete:
          os << "delete " << ev.id << "\n";
          break;
        case EventKind::GConn:
          os << "conn " << ev.id << " " << ev.id2 << "\n";
          break;
        default:
          assert(!"subgraph event in a geometric trace");
      }
  }
  return os.str();
}

namespace {

// Normalized kind weights; entries beyond cfg.mix are zero.
std::vector<double> mix_weights(const GenConfig& cfg) {
  size_t nkinds = cfg.mode == TraceMode::Subgraph ? 5 : 3;
  std::vector<double> w(nkinds, 0.0);
  if (cfg.mix.empty()) {
    if (cfg.mode == TraceMode::Subgraph)
      w = {0.3, 0.3, 0.2, 0.1, 0.1};
    else
      w = {0.4, 0.2, 0.4};
  } else {
    if (cfg.mix.size() > nkinds)
      throw ConfigError("mix has more entries than event kinds");
    for (size_t i = 0; i < cfg.mix.size(); ++i) {
      if (cfg.mix[i] < 0) throw ConfigError("mix ratios must be nonnegative");
      w[i] = cfg.mix[i];
    }
  }
  double sum = 0;
  for (double x : w) sum += x;
  if (sum <= 0) throw ConfigError("mix ratios must not all be zero");
  for (double& x : w) x /= sum;
  return w;
}

size_t pick_kind(SplitMix64& rng, const std::vector<double>& w) {
  double r = rng.unit(), acc = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    acc += w[i];
    if (r < acc) return i;
  }
  return w.size() - 1;
}

// Uniform member of a 0/1 mask with the given popcount.  count > 0.
uint32_t pick_masked(SplitMix64& rng, const std::vector<char>& mask,
                     uint32_t count, bool want) {
  uint64_t k = rng.below(count);
  for (uint32_t v = 0;; ++v)
    if (static_cast<bool>(mask[v]) == want && k-- == 0) return v;
}

void gen_subgraph(const GenConfig& cfg, SplitMix64& rng, Trace& t) {
  uint32_t n = cfg.n;
  t.g = BaseGraph::make(n);
  if (n >= 2) {
    uint32_t m = (5 * n + 1) / 2;
    for (uint32_t i = 0; i < m; ++i) {
      auto u = static_cast<VertexId>(rng.below(n));
      auto v = static_cast<VertexId>(rng.below(n));
      if (u == v) v = (v + 1) % n;
      t.g.add_edge(u, v);
    }
  }

  std::vector<double> w = mix_weights(cfg);
  std::vector<char> active(n, 0);
  uint32_t active_cnt = 0;
  std::vector<int64_t> live_handles, retired;
  int64_t next_handle = 0;

  enum { kOn, kOff, kConn, kAddE, kDelE };
  // First feasible kind wins; 'on' or 'off' is always feasible for n >= 1.
  static constexpr size_t chains[5][4] = {{kOn, kOff},
                                          {kOff, kOn},
                                          {kConn, kOn, kOff},
                                          {kAddE, kOn, kOff},
                                          {kDelE, kAddE, kOn, kOff}};
  static constexpr size_t chain_len[5] = {2, 2, 3, 3, 4};
  auto feasible = [&](size_t k) {
    switch (k) {
      case kOn:
        return active_cnt < n;
      case kOff:
        return active_cnt > 0;
      case kConn:
        return active_cnt > 0;
      case kAddE:
        return n >= 2;
      default:
        return !live_handles.empty();
    }
  };

  for (uint32_t op = 0; op < cfg.ops; ++op) {
    size_t want = pick_kind(rng, w), k = want;
    for (size_t i = 0; i < chain_len[want]; ++i)
      if (feasible(chains[want][i])) {
        k = chains[want][i];
        break;
      }
    TraceEvent ev;
    switch (k) {
      case kOn: {
        ev.kind = EventKind::On;
        ev.u = pick_masked(rng, active, n - active_cnt, false);
        active[ev.u] = 1;
        ++active_cnt;
        break;
      }
      case kOff: {
        ev.kind = EventKind::Off;
        ev.u = pick_masked(rng, active, active_cnt, true);
        active[ev.u] = 0;
        --active_cnt;
        break;
      }
      case kConn: {
        ev.kind = EventKind::Conn;
        ev.u = pick_masked(rng, active, active_cnt, true);
        ev.v = pick_masked(rng, active, active_cnt, true);
        break;
      }
      case kAddE: {
        ev.kind = EventKind::AddE;
        ev.u = static_cast<VertexId>(rng.below(n));
        ev.v = static_cast<VertexId>(rng.below(n));
        if (ev.u == ev.v) ev.v = (ev.v + 1) % n;
        if (!retired.empty() && rng.below(4) == 0) {
          size_t j = rng.below(retired.size());
          ev.handle = retired[j];
          retired[j] = retired.back();
          retired.pop_back();
        } else {
          ev.handle = next_handle++;
        }
        live_handles.push_back(ev.handle);
        break;
      }
      default: {
        ev.kind = EventKind::DelE;
        size_t j = rng.below(live_handles.size());
        ev.handle = live_handles[j];
        live_handles[j] = live_handles.back();
        live_handles.pop_back();
        retired.push_back(ev.handle);
        break;
      }
    }
    t.events.push_back(std::move(ev));
  }
}

void gen_geom(const GenConfig& cfg, SplitMix64& rng, Trace& t) {
  t.dim = cfg.dim;
  uint64_t target = std::max<uint32_t>(cfg.n, 1);
  int64_t span = 4 * static_cast<int64_t>(target);

  std::vector<double> w = mix_weights(cfg);
  std::vector<int64_t> live, dead;
  int64_t next_id = 0;

  enum { kInsert, kDelete, kGConn };
  static constexpr size_t chains[3][2] = {
      {kInsert, kDelete}, {kDelete, kInsert}, {kGConn, kInsert}};
  auto feasible = [&](size_t k) {
    switch (k) {
      case kInsert:
        return live.size() < 2 * target;  // hold live count near the target
      case kDelete:
        return !live.empty();
      default:
        return !live.empty();
    }
  };

  for (uint32_t op = 0; op < cfg.ops; ++op) {
    size_t want = pick_kind(rng, w), k = want;
    for (size_t i = 0; i < 2; ++i)
      if (feasible(chains[want][i])) {
        k = chains[want][i];
        break;
      }
    TraceEvent ev;
    switch (k) {
      case kInsert: {
        ev.kind = EventKind::Insert;
        if (!dead.empty() && rng.below(4) == 0) {
          size_t j = rng.below(dead.size());
          ev.id = dead[j];
          dead[j] = dead.back();
          dead.pop_back();
        } else {
          ev.id = next_id++;
        }
        for (int i = 0; i < t.dim; ++i) {
          int64_t lo = rng.range(0, span);
          int64_t hi = std::min<int64_t>(lo + static_cast<int64_t>(rng.below(target)),
                                         span);
          ev.lo.push_back(lo);
          ev.hi.push_back(hi);
        }
        live.push_back(ev.id);
        break;
      }
      case kDelete: {
        ev.kind = EventKind::Delete;
        size_t j = rng.below(live.size());
        ev.id = live[j];
        live[j] = live.back();
        live.pop_back();
        dead.push_back(ev.id);
        break;
      }
      default: {
        ev.kind = EventKind::GConn;
        ev.id = live[rng.below(live.size())];
        ev.id2 = live[rng.below(live.size())];
        break;
      }
    }
    t.events.push_back(std::move(ev));
  }
}

}  // namespace

std::string gen_trace(const GenConfig& cfg) {
  if (cfg.mode == TraceMode::Subgraph && cfg.n == 0 && cfg.ops > 0)
    throw ConfigError("cannot generate events for an empty vertex set");
  if (cfg.mode == TraceMode::Geom && (cfg.dim < 1 || cfg.dim > 16))
    throw ConfigError("dimension must be in [1, 16]");

  SplitMix64 rng(cfg.seed);
  Trace t;
  t.mode = cfg.mode;
  if (cfg.mode == TraceMode::Subgraph)
    gen_subgraph(cfg, rng, t);
  else
    gen_geom(cfg, rng, t);
  return "# seed " + std::to_string(cfg.seed) + "\n" + serialize_trace(t);
}

}  // namespace dyncon
