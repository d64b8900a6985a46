#pragma once

#include <cstdint>
#include <vector>

#include "dyncon/counters.hpp"

namespace dyncon {

// Dense bit-packed Boolean matrix.
struct BoolMatrix {
  uint32_t rows = 0;
  uint32_t cols = 0;
  uint32_t wpr = 0;  // 64-bit words per row
  uint64_t ones = 0;
  std::vector<uint64_t> bits;

  BoolMatrix() = default;
  BoolMatrix(uint32_t r, uint32_t c)
      : rows(r), cols(c), wpr((c + 63) / 64), bits(static_cast<size_t>(r) * wpr, 0) {}

  bool get(uint32_t i, uint32_t j) const {
    return (bits[static_cast<size_t>(i) * wpr + j / 64] >> (j % 64)) & 1;
  }
  void set(uint32_t i, uint32_t j) {
    uint64_t& w = bits[static_cast<size_t>(i) * wpr + j / 64];
    uint64_t m = 1ull << (j % 64);
    if (!(w & m)) {
      w |= m;
      ++ones;
    }
  }
  friend bool operator==(const BoolMatrix& a, const BoolMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.bits == b.bits;
  }
};

// C[i][k] = OR_j A[i][j] & B[j][k], word-parallel.  A.cols must equal B.rows.
BoolMatrix bool_matmul_dense(const BoolMatrix& a, const BoolMatrix& b,
                             Counters* counters);

// Same product, split by middle-index degree: middle columns with >= t ones
// in A go through the dense kernel (at most ones(A)/t of them), the rest are
// enumerated edge by edge for O(ones(B) * t) extra work.  1 <= t <= max(ones(A), 1).
BoolMatrix bool_matmul_sparse(const BoolMatrix& a, const BoolMatrix& b,
                              uint64_t t, Counters* counters);

}  // namespace dyncon
