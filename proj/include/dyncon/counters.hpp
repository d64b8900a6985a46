#pragma once

#include <cstdint>
#include <sstream>
#include <string>

namespace dyncon {

// Work counters shared by every structure in the library.  Each field counts
// elementary maintenance events, not wall time; the CSV column order below is
// part of the CLI contract.
struct Counters {
  uint64_t gstar_edge_updates = 0;  // link/cut operations in any maintained forest
  uint64_t gamma_updates = 0;       // vertex-to-component incidence mutations
  uint64_t c_updates = 0;           // pair table writes
  uint64_t component_splits = 0;    // component records split off
  uint64_t bit_ops = 0;             // word operations in Boolean matrix products
  uint64_t oracle_calls = 0;        // brute-force oracle invocations

  void reset() { *this = Counters{}; }
};

inline const char* counters_header() {
  return "op_index,gstar_edge_updates,gamma_updates,c_updates,component_splits,"
         "bit_ops,oracle_calls";
}

inline std::string counters_snapshot(const Counters& c, uint64_t op_index) {
  std::ostringstream os;
  os << op_index << ',' << c.gstar_edge_updates << ',' << c.gamma_updates << ','
     << c.c_updates << ',' << c.component_splits << ',' << c.bit_ops << ','
     << c.oracle_calls;
  return os.str();
}

}  // namespace dyncon
