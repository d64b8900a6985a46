#include "dyncon/bool_matrix.hpp"

#include <cassert>
#include <stdexcept>

namespace dyncon {

BoolMatrix bool_matmul_dense(const BoolMatrix& a, const BoolMatrix& b,
                             Counters* counters) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul dimension mismatch");
  BoolMatrix c(a.rows, b.cols);
  uint64_t ops = 0;
  for (uint32_t i = 0; i < a.rows; ++i) {
    uint64_t* crow = c.bits.data() + static_cast<size_t>(i) * c.wpr;
    const uint64_t* arow = a.bits.data() + static_cast<size_t>(i) * a.wpr;
    for (uint32_t jw = 0; jw < a.wpr; ++jw) {
      uint64_t w = arow[jw];
      ops += 1;
      while (w) {
        uint32_t j = jw * 64 + static_cast<uint32_t>(__builtin_ctzll(w));
        w &= w - 1;
        const uint64_t* brow = b.bits.data() + static_cast<size_t>(j) * b.wpr;
        for (uint32_t k = 0; k < b.wpr; ++k) crow[k] |= brow[k];
        ops += b.wpr;
      }
    }
  }
  // Recount ones once at the end.
  uint64_t ones = 0;
  for (uint64_t w : c.bits) ones += static_cast<uint64_t>(__builtin_popcountll(w));
  c.ones = ones;
  ops += c.bits.size();
  if (counters) counters->bit_ops += ops;
  return c;
}

BoolMatrix bool_matmul_sparse(const BoolMatrix& a, const BoolMatrix& b,
                              uint64_t t, Counters* counters) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul dimension mismatch");
  uint64_t m1 = a.ones;
  if (t < 1 || t > (m1 > 0 ? m1 : 1))
    throw std::invalid_argument("matmul threshold out of range");

  uint32_t mid = a.cols;
  uint64_t ops = 0;

  // Column degrees of A; columns with >= t ones are the dense part.
  std::vector<uint32_t> coldeg(mid, 0);
  std::vector<std::vector<uint32_t>> colrows(mid);
  for (uint32_t i = 0; i < a.rows; ++i) {
    const uint64_t* arow = a.bits.data() + static_cast<size_t>(i) * a.wpr;
    for (uint32_t jw = 0; jw < a.wpr; ++jw) {
      uint64_t w = arow[jw];
      ops += 1;
      while (w) {
        uint32_t j = jw * 64 + static_cast<uint32_t>(__builtin_ctzll(w));
        w &= w - 1;
        ++coldeg[j];
        colrows[j].push_back(i);
        ops += 1;
      }
    }
  }

  std::vector<uint32_t> high;
  for (uint32_t j = 0; j < mid; ++j)
    if (coldeg[j] >= t) high.push_back(j);
  assert(high.size() * t <= m1);

  // Dense kernel on the high middle indices.
  BoolMatrix ah(a.rows, static_cast<uint32_t>(high.size()));
  BoolMatrix bh(static_cast<uint32_t>(high.size()), b.cols);
  for (uint32_t hj = 0; hj < high.size(); ++hj) {
    uint32_t j = high[hj];
    for (uint32_t i : colrows[j]) ah.set(i, hj);
    const uint64_t* brow = b.bits.data() + static_cast<size_t>(j) * b.wpr;
    uint64_t* bhrow = bh.bits.data() + static_cast<size_t>(hj) * bh.wpr;
    for (uint32_t k = 0; k < b.wpr; ++k) bhrow[k] = brow[k];
    ops += b.wpr;
  }
  // bh.ones not needed below; keep it consistent anyway.
  for (uint64_t w : bh.bits) bh.ones += static_cast<uint64_t>(__builtin_popcountll(w));
  if (counters) counters->bit_ops += ops;
  BoolMatrix c = bool_matmul_dense(ah, bh, counters);
  ops = 0;

  // Low middle indices: enumerate each one of B against the < t rows of A.
  for (uint32_t j = 0; j < mid; ++j) {
    if (coldeg[j] >= t) continue;
    const uint64_t* brow = b.bits.data() + static_cast<size_t>(j) * b.wpr;
    for (uint32_t kw = 0; kw < b.wpr; ++kw) {
      uint64_t w = brow[kw];
      ops += 1;
      while (w) {
        uint32_t k = kw * 64 + static_cast<uint32_t>(__builtin_ctzll(w));
        w &= w - 1;
        for (uint32_t i : colrows[j]) {
          c.set(i, k);
          ops += 1;
        }
      }
    }
  }
  if (counters) counters->bit_ops += ops;
  return c;
}

}  // namespace dyncon
