#pragma once

// Independent reference computations used only by tests: naive definitions,
// brute-force enumerations and floating-point evaluation of infinite products.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "shiftpart/exact/rational.hpp"

namespace oracle {

using i64 = std::int64_t;
using cplx = std::complex<double>;

inline shiftpart::Rational saw(const shiftpart::Rational& x) {
  if (x.is_integer()) return 0;
  return x - shiftpart::Rational(shiftpart::floor(x)) - shiftpart::Rational(shiftpart::Integer(1), shiftpart::Integer(2));
}

// s(h,k) = sum_{r mod k} ((r/k)) ((hr/k))
inline shiftpart::Rational dedekind_sum_naive(i64 h, i64 k) {
  shiftpart::Rational s = 0;
  for (i64 r = 1; r < k; ++r)
    s += saw(shiftpart::Rational(shiftpart::Integer(r), shiftpart::Integer(k))) *
         saw(shiftpart::Rational(shiftpart::Integer(h * r), shiftpart::Integer(k)));
  return s;
}

// Coefficients of prod_{n>=1}(1-q^n) up to q^(len-1) from the pentagonal theorem.
inline std::vector<i64> pentagonal(std::size_t len) {
  std::vector<i64> out(len, 0);
  for (i64 k = 0;; ++k) {
    bool any = false;
    for (i64 kk : {k, -k}) {
      i64 e = kk * (3 * kk - 1) / 2;
      if (e < static_cast<i64>(len)) {
        out[e] = (k % 2 == 0) ? 1 : -1;
        any = true;
      }
      if (k == 0) break;
    }
    if (!any) break;
  }
  return out;
}

// Number of subsets of `parts` (distinct values) summing to n, by explicit recursion.
inline i64 subset_count(const std::vector<i64>& parts, i64 n) {
  std::function<i64(std::size_t, i64)> go = [&](std::size_t i, i64 rest) -> i64 {
    if (rest == 0) return 1;
    if (i == parts.size()) return 0;
    i64 c = go(i + 1, rest);
    if (parts[i] <= rest) c += go(i + 1, rest - parts[i]);
    return c;
  };
  return go(0, n);
}

// Allowed parts <= n for residues ±S mod delta.
inline std::vector<i64> allowed_parts(i64 delta, const std::vector<i64>& s, i64 n) {
  std::vector<i64> out;
  for (i64 l = 1; l <= n; ++l) {
    i64 r = l % delta;
    for (i64 g : s)
      if (r == g || r == delta - g) {
        out.push_back(l);
        break;
      }
  }
  return out;
}

inline cplx e(double x) { return std::polar(1.0, 2 * M_PI * x); }

inline double p2d(double x) {
  double f = x - std::floor(x);
  return f * f - f + 1.0 / 6.0;
}

// F_S(w) = e(ord*w) * prod_{l = ±g mod delta} (1 + e(l w)), product truncated once terms are tiny.
inline cplx f_s(i64 delta, const std::vector<i64>& s, cplx w) {
  double ord = 0;
  for (i64 g : s) ord += 0.5 * delta * p2d(static_cast<double>(g) / delta);
  const cplx two_pi_i(0, 2 * M_PI);
  cplx acc = std::exp(two_pi_i * ord * w);
  double y = w.imag();
  for (i64 l = 1;; ++l) {
    double mag = std::exp(-2 * M_PI * l * y);
    if (mag < 1e-18) break;
    i64 r = l % delta;
    for (i64 g : s)
      if (r == g || r == delta - g) {
        acc *= 1.0 + std::exp(two_pi_i * static_cast<double>(l) * w);
        break;
      }
  }
  return acc;
}

// Siegel-type function eta^(s)_{g,h}(tau) for 0 <= g,h < delta, straight from its product.
inline cplx siegel(i64 delta, i64 g, i64 h, cplx tau) {
  const cplx two_pi_i(0, 2 * M_PI);
  double gd = static_cast<double>(g) / delta, hd = static_cast<double>(h) / delta;
  cplx pref = std::exp(two_pi_i * (0.5 * p2d(gd)) * tau);
  if (g == 0 && h != 0) {
    double p1 = hd - std::floor(hd) - 0.5;
    pref *= (1.0 - e(-hd)) * e(p1 / 2);
  }
  cplx acc = pref;
  for (i64 m = 1;; ++m) {
    double mag = std::exp(-2 * M_PI * tau.imag() * m / delta);
    if (mag < 1e-18) break;
    cplx qm = std::exp(two_pi_i * tau * (static_cast<double>(m) / delta));
    if (m % delta == g) acc *= 1.0 - e(hd) * qm;
    if (m % delta == (delta - g) % delta) acc *= 1.0 - e(-hd) * qm;
  }
  return acc;
}

}  // namespace oracle
