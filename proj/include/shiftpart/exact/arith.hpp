#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/rational.hpp"

namespace shiftpart {

using i64 = std::int64_t;

// Nonnegative residue of a mod m (m > 0).
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

inline i64 lcm(i64 a, i64 b) {
  if (a == 0 || b == 0) return 0;
  i64 g = std::gcd(a, b);
  __int128 r = static_cast<__int128>(a / g) * b;
  if (r < 0) r = -r;
  if (r > INT64_MAX) throw overflow_error("lcm overflows 64 bits");
  return static_cast<i64>(r);
}

inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("64-bit multiplication overflow");
  return r;
}

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("64-bit addition overflow");
  return r;
}

// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<i64, i64, i64> egcd(i64 a, i64 b) {
  i64 old_r = a, r = b, old_x = 1, x = 0, old_y = 0, y = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_x, x) = std::make_pair(x, old_x - q * x);
    std::tie(old_y, y) = std::make_pair(y, old_y - q * y);
  }
  if (old_r < 0) return {-old_r, -old_x, -old_y};
  return {old_r, old_x, old_y};
}

// Inverse of a modulo m (m >= 1, gcd(a, m) = 1), in [0, m).
inline i64 inverse_mod(i64 a, i64 m) {
  auto [g, x, y] = egcd(mod(a, m), m);
  (void)y;
  if (g != 1) throw domain_error("no modular inverse");
  return mod(x, m);
}

inline std::vector<std::pair<i64, int>> factorize(i64 n) {
  if (n < 1) throw domain_error("factorize expects a positive integer");
  std::vector<std::pair<i64, int>> out;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) n /= p, ++e;
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline i64 radical(i64 n) {
  i64 r = 1;
  for (auto [p, e] : factorize(n)) r *= p;
  return r;
}

inline i64 euler_phi(i64 n) {
  i64 r = n;
  for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
  return r;
}

inline std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (auto [p, e] : factorize(n)) {
    std::size_t sz = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

using i128 = __int128;

inline i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Dedekind sum s(h, k) for k > 0 and gcd(h, k) = 1 as a reduced fraction (num, den).
// Reciprocity s(h,k) = (h/k + k/h + 1/(hk))/12 - 1/4 - s(k mod h, h), unwound from
// the bottom so every intermediate denominator divides 12 h k.
inline std::pair<i128, i128> dedekind_sum_fraction(i64 h, i64 k) {
  if (k <= 0) throw domain_error("dedekind_sum needs k > 0");
  if (gcd(h, k) != 1) throw domain_error("dedekind_sum needs gcd(h, k) = 1");
  h = mod(h, k);
  std::vector<std::pair<i64, i64>> chain;
  while (h != 0) {
    chain.push_back({h, k});
    i64 nh = k % h;
    k = h;
    h = nh;
  }
  i128 num = 0, den = 1;  // s(0, 1) = 0
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    i128 hh = it->first, kk = it->second;
    // term = (h^2 + k^2 + 1 - 3hk) / (12hk)
    i128 tn = hh * hh + kk * kk + 1 - 3 * hh * kk, td = 12 * hh * kk;
    i128 n2 = tn * den - num * td, d2 = td * den;
    i128 g = gcd128(n2, d2);
    num = n2 / g;
    den = d2 / g;
  }
  return {num, den};
}

inline Rational dedekind_sum(i64 h, i64 k) {
  auto [n, d] = dedekind_sum_fraction(h, k);
  const i128 lim = INT64_MAX;
  if (n > lim || -n > lim || d > lim) throw overflow_error("dedekind sum exceeds 64 bits");
  return Rational(Integer(static_cast<long>(n)), Integer(static_cast<long>(d)));
}

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace shiftpart
