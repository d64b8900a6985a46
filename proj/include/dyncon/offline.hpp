#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dyncon/box.hpp"
#include "dyncon/core.hpp"
#include "dyncon/counters.hpp"
#include "dyncon/params.hpp"
#include "dyncon/range_provider.hpp"

namespace dyncon {

struct OfflineConfig {
  // Unset fields are derived: delta = ceil(m^(1/3)) (subgraph) or from
  // offline_geom_params (geometric); q = ceil(m/delta) resp. the geometric
  // phase length; t = ceil(sqrt(delta)) resp. the geometric threshold.
  std::optional<uint64_t> delta;
  std::optional<uint64_t> q;
  std::optional<uint64_t> t;
  Rational b{1, 1};            // geometric only
  Rational alpha{147, 500};    // geometric only
  bool audit = false;          // recompute the pair table per phase and compare
};

struct OfflinePhaseStats {
  uint64_t phase = 0;
  uint64_t n_high = 0;       // rows of the left incidence matrix
  uint64_t n_comps = 0;      // middle dimension
  uint64_t n_q0 = 0;         // columns of the right incidence matrix
  uint64_t m1 = 0, m2 = 0;   // ones in left/right matrices
  uint64_t t = 0;
  uint64_t bit_ops = 0;      // product cost actually counted
  uint64_t predicted = 0;    // dense-restricted + enumeration cost model
};

// Runs the whole trace with phase-batched rebuilds: the vertex universe is
// partitioned per phase into a static part (components fixed, pair table from
// one Boolean matrix product) and the update set of that phase.  Events must
// be On/Off/Conn/AddE/DelE over g; answers are returned in query order.
std::vector<bool> run_offline_subgraph(
    const BaseGraph& g, const std::vector<TraceEvent>& events,
    const OfflineConfig& cfg, Counters* counters,
    std::vector<OfflinePhaseStats>* stats = nullptr);

// Offline geometric connectivity over Insert/Delete/GConn events: phases of q
// object updates; each phase rebuilds components of the static objects, a
// canonical collection over static plus soon-updated objects, and a helper
// graph whose only high vertices are the canonical subsets bigger than
// n/delta.
std::vector<bool> run_offline_geom(
    const std::vector<TraceEvent>& events, ProviderKind provider,
    const OfflineConfig& cfg, Counters* counters,
    std::vector<OfflinePhaseStats>* stats = nullptr);

}  // namespace dyncon
