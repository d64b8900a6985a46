#include "dyncon/runner.hpp"

#include <cassert>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "dyncon/geom_conn.hpp"
#include "dyncon/offline.hpp"
#include "dyncon/oracle.hpp"

namespace dyncon {

namespace {

// CSV sink: header on open, one row per flush point, final row deduplicated.
class CounterLog {
 public:
  CounterLog(const std::string& path, uint64_t every) : every_(every) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw ConfigError("cannot open counters file '" + path + "'");
    enabled_ = true;
    file_ << counters_header() << "\n";
  }

  void after_op(const Counters& c, uint64_t op_index) {
    if (enabled_ && every_ && op_index % every_ == 0) row(c, op_index);
  }

  void final_row(const Counters& c, uint64_t op_index) {
    if (enabled_ && last_ != op_index) row(c, op_index);
  }

 private:
  void row(const Counters& c, uint64_t op_index) {
    file_ << counters_snapshot(c, op_index) << "\n";
    last_ = op_index;
  }

  std::ofstream file_;
  bool enabled_ = false;
  uint64_t every_ = 0;
  uint64_t last_ = UINT64_MAX;
};

void answer_line(std::ostream& out, uint64_t qidx, bool got) {
  out << qidx << (got ? " true" : " false") << "\n";
}

[[noreturn]] void report_mismatch(const TraceEvent& ev, uint64_t op,
                                  uint64_t qidx, bool expected, bool got) {
  std::ostringstream os;
  os << "oracle mismatch at op " << op << " (line " << ev.line << "), query "
     << qidx << ": conn ";
  if (ev.kind == EventKind::Conn)
    os << ev.u << " " << ev.v;
  else
    os << ev.id << " " << ev.id2;
  os << " expected " << (expected ? "true" : "false") << ", got "
     << (got ? "true" : "false");
  throw OracleMismatch(op, os.str());
}

// Replays the trace against the brute-force oracle and the structure's
// answers; also the shared answer-emission path for the offline modes.
void emit_subgraph_answers(const RunConfig& cfg, const Trace& t,
                           const std::vector<bool>& answers, Counters& cnt,
                           std::ostream& out) {
  std::vector<char> act(t.g.n, 0);
  std::unordered_map<int64_t, std::pair<VertexId, VertexId>> dyn;
  std::vector<std::pair<VertexId, VertexId>> extra;
  uint64_t qidx = 0;
  for (uint64_t op = 0; op < t.events.size(); ++op) {
    const TraceEvent& ev = t.events[op];
    switch (ev.kind) {
      case EventKind::On:
        act[ev.u] = 1;
        break;
      case EventKind::Off:
        act[ev.u] = 0;
        break;
      case EventKind::AddE:
        dyn.emplace(ev.handle, std::make_pair(ev.u, ev.v));
        break;
      case EventKind::DelE:
        dyn.erase(ev.handle);
        break;
      default: {
        assert(qidx < answers.size());
        bool got = answers[qidx];
        answer_line(out, qidx, got);
        if (cfg.check_oracle) {
          extra.clear();
          for (const auto& [h, e] : dyn) extra.push_back(e);
          ++cnt.oracle_calls;
          bool expected =
              oracle_connected_subgraph(t.g, act, ev.u, ev.v, extra);
          if (expected != got) report_mismatch(ev, op, qidx, expected, got);
        }
        ++qidx;
      }
    }
  }
  assert(qidx == answers.size());
}

void emit_geom_answers(const RunConfig& cfg, const Trace& t,
                       const std::vector<bool>& answers, Counters& cnt,
                       std::ostream& out) {
  std::vector<GeomObject> live;
  uint64_t qidx = 0;
  for (uint64_t op = 0; op < t.events.size(); ++op) {
    const TraceEvent& ev = t.events[op];
    switch (ev.kind) {
      case EventKind::Insert:
        live.push_back(GeomObject{ev.id, ev.lo, ev.hi});
        break;
      case EventKind::Delete:
        for (size_t i = 0; i < live.size(); ++i)
          if (live[i].id == ev.id) {
            live[i] = live.back();
            live.pop_back();
            break;
          }
        break;
      default: {
        assert(qidx < answers.size());
        bool got = answers[qidx];
        answer_line(out, qidx, got);
        if (cfg.check_oracle) {
          ++cnt.oracle_calls;
          bool expected = oracle_connected_geom(live, ev.id, ev.id2);
          if (expected != got) report_mismatch(ev, op, qidx, expected, got);
        }
        ++qidx;
      }
    }
  }
  assert(qidx == answers.size());
}

Counters run_subgraph_online(const RunConfig& cfg, const Trace& t,
                             std::ostream& out) {
  Counters cnt;
  CounterLog log(cfg.counters_out, cfg.counters_every);
  SubgraphParams sp = cfg.delta ? degree_params(t.g.m(), *cfg.delta)
                                : classic_params(t.g.m());
  SubgraphConn s(t.g, cfg.policy, SubgraphConfig{sp.delta, sp.q, {}},
                 std::vector<char>(t.g.n, 0), &cnt);

  std::unordered_map<int64_t, SubgraphConn::EdgeHandle> hs;
  std::vector<char> act(t.g.n, 0);
  std::unordered_map<int64_t, std::pair<VertexId, VertexId>> dyn;
  std::vector<std::pair<VertexId, VertexId>> extra;
  uint64_t qidx = 0;
  for (uint64_t op = 0; op < t.events.size(); ++op) {
    const TraceEvent& ev = t.events[op];
    switch (ev.kind) {
      case EventKind::On:
        s.turn_on(ev.u);
        act[ev.u] = 1;
        break;
      case EventKind::Off:
        s.turn_off(ev.u);
        act[ev.u] = 0;
        break;
      case EventKind::AddE:
        hs[ev.handle] = s.add_dyn_edge(ev.u, ev.v);
        if (cfg.check_oracle) dyn.emplace(ev.handle, std::make_pair(ev.u, ev.v));
        break;
      case EventKind::DelE: {
        auto it = hs.find(ev.handle);
        assert(it != hs.end());
        s.remove_dyn_edge(it->second);
        hs.erase(it);
        dyn.erase(ev.handle);
        break;
      }
      default: {
        bool got = s.connected(ev.u, ev.v);
        answer_line(out, qidx, got);
        if (cfg.check_oracle) {
          extra.clear();
          for (const auto& [h, e] : dyn) extra.push_back(e);
          ++cnt.oracle_calls;
          bool expected =
              oracle_connected_subgraph(t.g, act, ev.u, ev.v, extra);
          if (expected != got) report_mismatch(ev, op, qidx, expected, got);
        }
        ++qidx;
      }
    }
    log.after_op(cnt, op + 1);
  }
  log.final_row(cnt, t.events.size());
  return cnt;
}

Counters run_geom_online(const RunConfig& cfg, const Trace& t,
                         std::ostream& out) {
  Counters cnt;
  CounterLog log(cfg.counters_out, cfg.counters_every);
  GeomState gs(cfg.provider, cfg.b, &cnt);

  std::vector<GeomObject> live;
  uint64_t qidx = 0;
  for (uint64_t op = 0; op < t.events.size(); ++op) {
    const TraceEvent& ev = t.events[op];
    switch (ev.kind) {
      case EventKind::Insert: {
        GeomObject o{ev.id, ev.lo, ev.hi};
        gs.insert(o);
        if (cfg.check_oracle) live.push_back(std::move(o));
        break;
      }
      case EventKind::Delete:
        gs.delete_object(ev.id);
        for (size_t i = 0; i < live.size(); ++i)
          if (live[i].id == ev.id) {
            live[i] = live.back();
            live.pop_back();
            break;
          }
        break;
      default: {
        bool got = gs.connected(ev.id, ev.id2);
        answer_line(out, qidx, got);
        if (cfg.check_oracle) {
          ++cnt.oracle_calls;
          bool expected = oracle_connected_geom(live, ev.id, ev.id2);
          if (expected != got) report_mismatch(ev, op, qidx, expected, got);
        }
        ++qidx;
      }
    }
    log.after_op(cnt, op + 1);
  }
  log.final_row(cnt, t.events.size());
  return cnt;
}

Counters run_subgraph_offline(const RunConfig& cfg, const Trace& t,
                              std::ostream& out) {
  Counters cnt;
  CounterLog log(cfg.counters_out, cfg.counters_every);
  OfflineConfig ocfg;
  ocfg.delta = cfg.delta;
  std::vector<bool> ans = run_offline_subgraph(t.g, t.events, ocfg, &cnt);
  emit_subgraph_answers(cfg, t, ans, cnt, out);
  log.final_row(cnt, t.events.size());
  return cnt;
}

Counters run_geom_offline(const RunConfig& cfg, const Trace& t,
                          std::ostream& out) {
  Counters cnt;
  CounterLog log(cfg.counters_out, cfg.counters_every);
  OfflineConfig ocfg;
  ocfg.delta = cfg.delta;
  ocfg.b = cfg.b;
  ocfg.alpha = cfg.alpha;
  std::vector<bool> ans = run_offline_geom(t.events, cfg.provider, ocfg, &cnt);
  emit_geom_answers(cfg, t, ans, cnt, out);
  log.final_row(cnt, t.events.size());
  return cnt;
}

void check_b(Rational b) {
  if (!(Rational(0) < b && b <= Rational(1)))
    throw ConfigError("b must be in (0, 1]");
}

}  // namespace

Counters run_trace(const RunConfig& cfg, std::istream& in, std::ostream& out) {
  if (cfg.delta && *cfg.delta == 0)
    throw ConfigError("delta must be positive");
  Trace t = parse_trace(in);
  bool want_subgraph =
      cfg.mode == RunMode::Subgraph || cfg.mode == RunMode::SubgraphOffline;
  if (want_subgraph && t.mode != TraceMode::Subgraph)
    throw ConfigError("subgraph mode needs a trace with a 'graph' header");
  if (!want_subgraph && t.mode != TraceMode::Geom)
    throw ConfigError("geometric mode needs a trace with a 'geom' header");

  switch (cfg.mode) {
    case RunMode::Subgraph:
      return run_subgraph_online(cfg, t, out);
    case RunMode::Geom:
      check_b(cfg.b);
      if (cfg.delta)
        throw ConfigError("explicit delta applies to subgraph and offline modes");
      return run_geom_online(cfg, t, out);
    case RunMode::SubgraphOffline:
      return run_subgraph_offline(cfg, t, out);
    default:
      return run_geom_offline(cfg, t, out);
  }
}

std::string params_report_subgraph(uint64_t m) {
  SubgraphParams p = classic_params(m);
  std::ostringstream os;
  os << "subgraph online, m = " << m << "\n"
     << "  delta (degree threshold)  " << p.delta << "\n"
     << "  q (updates per phase)     " << p.q << "\n"
     << "  update exponent           2/3\n"
     << "  query exponent            1/3\n";
  return os.str();
}

std::string params_report_geom(uint64_t n, Rational b) {
  check_b(b);
  GeomParams p = geom_params(n, b);
  ExponentPair e = exponents_for_b(b);
  std::ostringstream os;
  os << "geometric online, n = " << n << ", b = " << b.str() << "\n"
     << "  y (updates per phase)     " << p.y << "\n"
     << "  delta (inner threshold)   " << p.delta << "\n"
     << "  update exponent           " << e.update.str() << "\n"
     << "  query exponent            " << e.query.str() << "\n";
  return os.str();
}

std::string params_report_geom_offline(uint64_t n, Rational b, Rational alpha) {
  check_b(b);
  if (!(Rational(0) < alpha && alpha < Rational(1)))
    throw ConfigError("alpha must be in (0, 1)");
  OfflineGeomParams p = offline_geom_params(n, b, alpha);
  ExponentPair e = offline_exponents(b, alpha);
  std::ostringstream os;
  os << "geometric offline, n = " << n << ", b = " << b.str() << ", alpha = "
     << alpha.str() << "\n"
     << "  q (updates per phase)     " << p.q << "\n"
     << "  delta (big threshold)     " << p.delta << "\n"
     << "  t (multiply threshold)    " << p.t << "\n"
     << "  update exponent           " << e.update.str() << "\n"
     << "  query exponent            " << e.query.str() << "\n";
  return os.str();
}

}  // namespace dyncon
