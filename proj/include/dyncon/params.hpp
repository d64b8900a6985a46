#pragma once

#include <cstdint>

#include "dyncon/rational.hpp"

namespace dyncon {

// Smallest k >= 0 with k^den >= x^num, i.e. ceil(x^(num/den)) computed with
// exact big integers.  Requires den >= 1, num >= 0.
uint64_t pow_ceil(uint64_t x, uint64_t num, uint64_t den);

// True iff a^e1 <= b^e2, exactly.
bool pow_le(uint64_t a, uint64_t e1, uint64_t b, uint64_t e2);

struct SubgraphParams {
  uint64_t delta;  // component degree threshold
  uint64_t q;      // updates per phase
};

// delta = max(1, ceil(m^(1/3))), q = max(1, ceil(m/delta)).
SubgraphParams classic_params(uint64_t m);

// Caller-chosen delta; q = max(1, ceil(m/delta)).
SubgraphParams degree_params(uint64_t m, uint64_t delta);

struct GeomParams {
  uint64_t y;      // updates per phase
  uint64_t delta;  // inner structure threshold, ceil(n^(b/(2+b)))
};

// b in (0, 1].  y = max(1, ceil(n^b)), delta = max(1, ceil(n^(b/(2+b)))).
GeomParams geom_params(uint64_t n, Rational b);

struct ExponentPair {
  Rational update;
  Rational query;
};

// Amortized update and query exponents for the online geometric structure:
// (1 - b^2/(2+b), b/(2+b)).
ExponentPair exponents_for_b(Rational b);

struct OfflineGeomParams {
  uint64_t q;      // object updates per phase
  uint64_t delta;  // big-subset threshold divisor
  uint64_t t;      // sparse matrix multiply threshold
};

// Offline geometric parameters for n objects.  Solves q = n^(1/(1+a-ba/2)),
// delta = q^a, t = delta^(b/2), then clamps with exact integer comparisons so
// that delta <= q, q * delta^(1-b) <= n, and q * t <= n all hold.
OfflineGeomParams offline_geom_params(uint64_t n, Rational b, Rational alpha);

// Update and query exponents of the offline geometric algorithm:
// ((1 + a - ba) / (1 + a - ba/2), a / (1 + a - ba/2)).
ExponentPair offline_exponents(Rational b, Rational alpha);

}  // namespace dyncon
