#pragma once

#include <utility>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/etaq/cusp_context.hpp"
#include "shiftpart/exact/bernoulli.hpp"
#include "shiftpart/exact/cyclotomic.hpp"
#include "shiftpart/qseries/products.hpp"

namespace shiftpart {

inline Rational ratio(i64 p, i64 q) { return Rational(Integer(p), Integer(q)); }

// (1 - zeta_delta^{-h}) e(P1(h/delta)/2) if g = 0 and h != 0 (mod delta), else 1.
inline CyclotomicNumber alpha(i64 delta, i64 g, i64 h) {
  if (mod(g, delta) != 0 || mod(h, delta) == 0) return CyclotomicNumber(1);
  CyclotomicNumber one_minus = CyclotomicNumber(1) - CyclotomicNumber::root(-h, delta);
  return one_minus * root_of_unity(frac(p1(ratio(h, delta)) / 2));
}

// The generalized eta function eta^(s)_{g,h}(tau): alpha q^{P2(g/delta)/2}
// prod_{m = g} (1 - zeta^h q^{m/delta}) prod_{m = -g} (1 - zeta^{-h} q^{m/delta}).
inline QSeries<CyclotomicNumber> eta_generalized_expansion(i64 delta, i64 g, i64 h, const Rational& precision) {
  if (g < 0 || g >= delta || h < 0 || h >= delta) throw domain_error("eta_generalized needs 0 <= g, h < delta");
  Rational lead = p2(ratio(g, delta)) / 2;
  Rational rest = precision - lead;
  i64 top = rest.sign() <= 0 ? 0 : to_i64(ceil(rest * delta));
  std::vector<SparseFactor<Root>> fs;
  for (i64 m = 1; m < top; ++m) {
    if (m % delta == g) fs.push_back({Root{h}, ratio(m, delta), -1});
    if (m % delta == (delta - g) % delta) fs.push_back({Root{-h}, ratio(m, delta), -1});
  }
  auto prod = sparse_factor_product<RootSum, Root>(std::span<const SparseFactor<Root>>(fs), ratio(top, delta),
                                                   RootSum::unit(delta));
  auto series = prod.cast<CyclotomicNumber>().scaled(alpha(delta, g, h));
  return series.times_q_power(lead).truncated_at(precision);
}

// (g', h') = A0^T (g, t g): g' = g(delta a + t c)/D, h' = g(a b0 + b D + t d0 a).
inline std::pair<i64, i64> gh_primed(const CuspContext& x, i64 g, i64 t) {
  i64 num = g * (x.delta * x.a + t * x.c);
  if (num % x.D != 0) throw integrality_error("g' is not integral");
  return {num / x.D, g * (x.a * x.b0 + x.b * x.D + t * x.d0 * x.a)};
}

namespace detail {

// eta^(s)_{g,h} = e(kappa) * Siegel function g_{(g/delta, h/delta)}, for reduced 0 <= g, h < delta.
inline Rational siegel_kappa(i64 delta, i64 g, i64 h) {
  Rational r1 = ratio(g, delta), r2 = ratio(h, delta);
  if (g == 0) {
    if (h == 0) throw domain_error("eta^(s)_{0,0} is not defined");
    return p1(r2) / 2 - r2 / 2;
  }
  return ratio(1, 2) - r2 * (r1 - 1) / 2;
}

// Klein forms: k_{r+b} = e(value) k_r for integral b.
inline Rational klein_translation(const Rational& r1, const Rational& r2, const Integer& b1, const Integer& b2) {
  Integer parity = (b1 * b2 + b1 + b2) % 2;
  if (parity < 0) parity += 2;
  return Rational(parity) / 2 - (Rational(b1) * r2 - Rational(b2) * r1) / 2;
}

// eta(M tau)^2 = e(value) (c tau + d) eta(tau)^2 for c > 0.
inline Rational eta_multiplier_squared(const Matrix2& m) {
  auto [a, b, c, d] = m;
  (void)b;
  if (c <= 0) throw domain_error("eta multiplier needs c > 0");
  return ratio(a + d, 12 * c) - dedekind_sum(d, c) - ratio(1, 4);
}

}  // namespace detail

// Phase theta in [0, 1) with eta^(s)_{g,h}(M tau) = e(theta) eta^(s)_{g~,h~}(tau),
// where (g~, h~) = (g, h) M reduced mod delta. Siegel function = Klein form
// times eta^2, so theta collects the eta multiplier, the Klein translation to
// the reduced index, and the two normalizing constants.
inline Rational siegel_transformation_phase(i64 delta, i64 g, i64 h, const Matrix2& m) {
  auto [a, b, c, d] = m;
  if (c <= 0) throw domain_error("eta multiplier needs c > 0");
  g = mod(g, delta);
  h = mod(h, delta);
  // everything below is an integer multiple of 1/den, den = lcm(4 delta^2, 12 c)
  const i128 den4 = static_cast<i128>(4) * delta * delta, den12 = static_cast<i128>(12) * c;
  const i128 den = den4 / gcd128(den4, den12) * den12;
  const i128 u1 = static_cast<i128>(g) * a + static_cast<i128>(h) * c;
  const i128 u2 = static_cast<i128>(g) * b + static_cast<i128>(h) * d;
  auto fdiv = [](i128 x, i128 y) { i128 q = x / y; return (x % y != 0 && (x < 0)) ? q - 1 : q; };
  const i128 b1 = fdiv(u1, delta), b2 = fdiv(u2, delta);
  const i128 gt = u1 - b1 * delta, ht = u2 - b2 * delta;
  // kappa(g, h) * den
  auto kappa = [&](i128 gg, i128 hh) -> i128 {
    const i128 unit = den / (4 * static_cast<i128>(delta) * delta);  // den / (4 delta^2)
    if (gg == 0) {
      if (hh == 0) throw domain_error("eta^(s)_{0,0} is not defined");
      // P1(h/delta)/2 - h/(2 delta) = (h - delta/2)/(2 delta) - h/(2 delta) = -1/4
      return -unit * delta * delta;
    }
    // 1/2 - h (g - delta) / (2 delta^2)
    return unit * (2 * static_cast<i128>(delta) * delta - 2 * hh * (gg - delta));
  };
  auto [sn, sd] = dedekind_sum_fraction(d, c);
  i128 eta = (static_cast<i128>(a) + d) * (den / (12 * static_cast<i128>(c))) - sn * (den / sd) - den / 4;
  i128 par = ((b1 * b2 + b1 + b2) % 2 + 2) % 2;
  i128 klein = par * (den / 2) - (b1 * ht - b2 * gt) * (den / (2 * static_cast<i128>(delta)));
  i128 theta = kappa(g, h) + eta + klein - kappa(gt, ht);
  theta %= den;
  if (theta < 0) theta += den;
  const i128 lim = INT64_MAX;
  if (den > lim) throw overflow_error("transformation phase denominator exceeds 64 bits");
  return Rational(Integer(static_cast<long>(theta)), Integer(static_cast<long>(den)));
}

// mu in [0, 2) with eta^(s)_{g,tg}(delta A tau) = e(mu/2) eta^(s)_{g',h'}((D^2 tau - D b0)/delta).
inline Rational mu(const CuspContext& x, i64 g, i64 t) {
  if (x.c <= 0) throw domain_error("mu is undefined at the cusp infinity");
  if (mod(g, x.delta) == 0) throw domain_error("mu needs g != 0 mod delta");
  return 2 * siegel_transformation_phase(x.delta, g, t * g, x.a0());
}

// The closed form printed alongside the transformation law. It does not
// reproduce the law numerically and is kept only for comparison in tests.
inline Rational mu_as_printed(const CuspContext& x, i64 g, i64 t) {
  if (x.c <= 0) throw domain_error("mu is undefined at the cusp infinity");
  auto [gp, hp] = gh_primed(x, g, t);
  (void)hp;
  Rational s = ratio(x.delta * x.a, x.c) * p2(ratio(g, x.delta)) +
               ratio(x.d0 * x.a * x.D, x.c) * p2(ratio(gp, x.delta));
  for (i64 nu = 0; nu < x.c / x.D; ++nu)
    s -= 2 * p1(ratio(x.D * (x.delta * nu + g), x.delta * x.c)) * p1(ratio(x.D * gp + x.delta * x.delta * x.a * nu, x.c));
  return s;
}

}  // namespace shiftpart
