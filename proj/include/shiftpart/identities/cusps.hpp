#pragma once

#include <utility>
#include <vector>

#include "shiftpart/exact/arith.hpp"

namespace shiftpart {

struct Cusp {
  i64 a, c;
  friend bool operator==(const Cusp&, const Cusp&) = default;
};

// Class of a/c under Gamma1(N): (c mod N, a mod gcd(c, N)) up to a common sign.
// Returned as (c0, a0) with 0 <= c0 <= N/2; a0 reduced up to sign when c0 = -c0.
inline std::pair<i64, i64> cusp_key(i64 a, i64 c, i64 n) {
  i64 c0 = mod(c, n), a0 = a;
  if (2 * c0 > n) {
    c0 = n - c0;
    a0 = -a0;
  }
  i64 g = gcd(c0, n);  // = n when c0 = 0
  a0 = mod(a0, g);
  if (c0 == 0 || 2 * c0 == n) a0 = std::min(a0, mod(-a0, g));
  return {c0, a0};
}

// One representative per class, with c in [1, N] and the least a >= 0 coprime
// to c; ordered by c, then a.
inline std::vector<Cusp> cusp_representatives(i64 n) {
  if (n < 1) throw domain_error("cusp_representatives needs N >= 1");
  std::vector<Cusp> out;
  auto emit = [&](i64 c, i64 c0) {
    i64 g = gcd(c0, n);
    std::vector<Cusp> here;
    for (i64 a0 = 0; a0 < g; ++a0) {
      if (gcd(a0, g) != 1) continue;
      if ((c0 == 0 || 2 * c0 == n) && mod(-a0, g) < a0) continue;
      i64 a = a0;
      while (gcd(a, c) != 1) a += g;
      here.push_back({a, c});
    }
    std::sort(here.begin(), here.end(), [](const Cusp& x, const Cusp& y) { return x.a < y.a; });
    out.insert(out.end(), here.begin(), here.end());
  };
  for (i64 c = 1; 2 * c <= n; ++c) emit(c, c);
  emit(n, 0);
  return out;
}

// (1/2) sum_{d | N} phi(d) phi(N/d), valid for N > 4.
inline i64 cusp_count_formula(i64 n) {
  i64 s = 0;
  for (i64 d : divisors(n)) s += euler_phi(d) * euler_phi(n / d);
  return s / 2;
}

}  // namespace shiftpart
