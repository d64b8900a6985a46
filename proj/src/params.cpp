#include "dyncon/params.hpp"

#include <cassert>

#include <boost/multiprecision/cpp_int.hpp>

namespace dyncon {

using bigint = boost::multiprecision::cpp_int;

static bigint ipow(bigint base, uint64_t exp) {
  bigint r = 1;
  while (exp) {
    if (exp & 1) r *= base;
    base *= base;
    exp >>= 1;
  }
  return r;
}

bool pow_le(uint64_t a, uint64_t e1, uint64_t b, uint64_t e2) {
  return ipow(a, e1) <= ipow(b, e2);
}

uint64_t pow_ceil(uint64_t x, uint64_t num, uint64_t den) {
  assert(den >= 1);
  if (num == 0) return x == 0 ? 0 : 1;  // x^0 = 1 for x >= 1
  if (x <= 1) return x;
  bigint target = ipow(x, num);
  // Smallest k with k^den >= x^num; k <= x^ceil(num/den) keeps doubling short.
  uint64_t hi = 1;
  while (ipow(hi, den) < target) hi *= 2;
  uint64_t lo = hi / 2;  // lo^den < target <= hi^den
  while (lo + 1 < hi) {
    uint64_t mid = lo + (hi - lo) / 2;
    if (ipow(mid, den) < target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

SubgraphParams classic_params(uint64_t m) {
  uint64_t delta = pow_ceil(m, 1, 3);
  if (delta == 0) delta = 1;
  return degree_params(m, delta);
}

SubgraphParams degree_params(uint64_t m, uint64_t delta) {
  assert(delta >= 1);
  uint64_t q = (m + delta - 1) / delta;
  if (q == 0) q = 1;
  return {delta, q};
}

GeomParams geom_params(uint64_t n, Rational b) {
  assert(0 < b.num && b <= Rational(1));
  uint64_t y = pow_ceil(n, static_cast<uint64_t>(b.num),
                        static_cast<uint64_t>(b.den));
  if (y == 0) y = 1;
  // b/(2+b) = num / (2*den + num)
  uint64_t delta = pow_ceil(n, static_cast<uint64_t>(b.num),
                            static_cast<uint64_t>(2 * b.den + b.num));
  if (delta == 0) delta = 1;
  return {y, delta};
}

ExponentPair exponents_for_b(Rational b) {
  Rational query = b / (Rational(2) + b);
  Rational update = Rational(1) - b * b / (Rational(2) + b);
  return {update, query};
}

ExponentPair offline_exponents(Rational b, Rational alpha) {
  Rational denom = Rational(1) + alpha - b * alpha / Rational(2);
  Rational update = (Rational(1) + alpha - b * alpha) / denom;
  Rational query = alpha / denom;
  return {update, query};
}

OfflineGeomParams offline_geom_params(uint64_t n, Rational b, Rational alpha) {
  assert(0 < b.num && b <= Rational(1));
  assert(0 < alpha.num && alpha < Rational(1));
  if (n == 0) return {1, 1, 1};

  // q0 = ceil(n^(1/(1+a-ba/2))); the exponent's reciprocal is den'/num'.
  Rational inv = Rational(1) + alpha - b * alpha / Rational(2);
  uint64_t q = pow_ceil(n, static_cast<uint64_t>(inv.den),
                        static_cast<uint64_t>(inv.num));
  if (q == 0) q = 1;
  if (q > n) q = n;

  // delta = ceil(q^a), clamped into [1, q].
  uint64_t delta = pow_ceil(q, static_cast<uint64_t>(alpha.num),
                            static_cast<uint64_t>(alpha.den));
  if (delta == 0) delta = 1;
  if (delta > q) delta = q;

  // Ceil rounding can push q * delta^(1-b) past n; shrink q until
  // q^(b.den) * delta^(b.den - b.num) <= n^(b.den) holds exactly.
  uint64_t bd = static_cast<uint64_t>(b.den);
  uint64_t bn = static_cast<uint64_t>(b.num);
  auto fits = [&](uint64_t qq) {
    return ipow(qq, bd) * ipow(delta, bd - bn) <= ipow(n, bd);
  };
  if (!fits(q)) {
    uint64_t lo = 1, hi = q;  // fits(lo), !fits(hi); find the largest fitting q
    while (lo + 1 < hi) {
      uint64_t mid = lo + (hi - lo) / 2;
      if (fits(mid))
        lo = mid;
      else
        hi = mid;
    }
    q = lo;
  }
  if (delta > q) delta = q;

  // t = ceil(delta^(b/2)) = ceil(delta^(b.num/(2*b.den))), kept <= n/q.
  uint64_t t = pow_ceil(delta, bn, 2 * bd);
  if (t == 0) t = 1;
  uint64_t cap = n / q;
  if (cap == 0) cap = 1;
  if (t > cap) t = cap;

  assert(delta >= 1 && delta <= q);
  assert(fits(q));
  assert(t >= 1 && q * t <= n);
  return {q, delta, t};
}

}  // namespace dyncon
