#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "dyncon/counters.hpp"
#include "dyncon/core.hpp"
#include "dyncon/params.hpp"
#include "dyncon/range_provider.hpp"
#include "dyncon/subgraph_conn.hpp"
#include "dyncon/trace.hpp"

namespace dyncon {

enum class RunMode { Subgraph, Geom, SubgraphOffline, GeomOffline };

// Raised when --check-oracle finds a disagreement.
struct OracleMismatch : std::runtime_error {
  uint64_t op_index;
  OracleMismatch(uint64_t op, const std::string& msg)
      : std::runtime_error(msg), op_index(op) {}
};

struct RunConfig {
  RunMode mode = RunMode::Subgraph;
  Policy policy = Policy::Classic;          // subgraph online
  std::optional<uint64_t> delta;            // empty = auto (ceil(m^(1/3)))
  Rational b{1, 1};                         // geometric modes
  Rational alpha{147, 500};                 // offline geometric
  ProviderKind provider = ProviderKind::Boxes;
  bool check_oracle = false;
  std::string counters_out;                 // empty = no counters file
  uint64_t counters_every = 100;            // 0 = final row only
};

// Parses and runs one trace; answer lines "<query-index> <true|false>" go to
// out.  Throws ParseError (bad trace or event preconditions), ConfigError
// (mode/trace mismatch, bad parameters), OracleMismatch (--check-oracle).
Counters run_trace(const RunConfig& cfg, std::istream& in, std::ostream& out);

// Human-readable parameter table for the CLI params subcommand.
std::string params_report_subgraph(uint64_t m);
std::string params_report_geom(uint64_t n, Rational b);
std::string params_report_geom_offline(uint64_t n, Rational b, Rational alpha);

}  // namespace dyncon
