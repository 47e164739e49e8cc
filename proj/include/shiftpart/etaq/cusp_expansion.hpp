#pragma once

#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/etaq/cusp_context.hpp"
#include "shiftpart/etaq/partition_spec.hpp"
#include "shiftpart/etaq/siegel.hpp"
#include "shiftpart/qseries/products.hpp"

namespace shiftpart {

// Order of F_S(tau + t/delta) at the cusp a/c.
inline Rational ord_t_at_cusp(const PartitionSpec& s, const CuspContext& x, i64 t) {
  const i64 delta = s.delta();
  if (x.delta != delta) throw domain_error("context modulus does not match spec");
  const i64 D = x.D, eps = x.epsilon;
  // (eps^2/2) P2(2u/(eps q)) - P2(u/q) with q = delta D, over the common denominator 12 q^2
  const i128 q = static_cast<i128>(delta) * D, q1 = eps * q;
  i128 acc = 0;
  for (i64 g : s.parts()) {
    i128 u = static_cast<i128>(g) * (static_cast<i128>(delta) * x.a + static_cast<i128>(t) * x.c);
    i128 r1 = (2 * u) % q1, r2 = u % q;
    if (r1 < 0) r1 += q1;
    if (r2 < 0) r2 += q;
    acc += (6 * r1 * r1 - 6 * r1 * q1 + q1 * q1) - 2 * (6 * r2 * r2 - 6 * r2 * q + q * q);
  }
  // times D^2 / (2 delta) / (12 q^2)
  i128 num = acc * D * D, den = 24 * static_cast<i128>(delta) * q * q;
  i128 g = gcd128(num, den);
  num /= g;
  den /= g;
  const i128 lim = INT64_MAX;
  if (num > lim || -num > lim || den > lim) throw overflow_error("cusp order exceeds 64 bits");
  return Rational(Integer(static_cast<long>(num)), Integer(static_cast<long>(den)));
}

// alpha_{2 delta}((4/eps) g', 2 eps h') / alpha_delta(g', h') in closed form.
inline CyclotomicNumber alpha_ratio(i64 delta, i64 eps, i64 gp, i64 hp) {
  CyclotomicNumber num = alpha(2 * delta, 4 * gp / eps, 2 * eps * hp);
  if (mod(gp, delta) != 0 || mod(hp, delta) == 0) return num;
  // denominator is nontrivial
  if (eps == 1) return CyclotomicNumber(1);
  if (mod(2 * hp, delta) == 0) return CyclotomicNumber(ratio(1, 2));
  CyclotomicNumber one_plus = CyclotomicNumber(1) + CyclotomicNumber::root(-hp, delta);
  return one_plus * root_of_unity(frac((p1(ratio(2 * hp, delta)) - p1(ratio(hp, delta))) / 2));
}

// Leading coefficient of F_S(tau + t/delta) at a/c.
inline CyclotomicNumber z_leading(const PartitionSpec& s, const CuspContext& x, i64 t) {
  if (x.c <= 0) throw domain_error("z_leading is undefined at the cusp infinity");
  const i64 delta = s.delta();
  CuspContext x2 = x.doubled();
  Rational phase = 0;
  CyclotomicNumber factor(1);
  for (i64 g : s.parts()) {
    phase += Rational(t) * p2(ratio(g, delta)) + mu(x2, 2 * g, 2 * t) - mu(x, g, t);
    auto [gp, hp] = gh_primed(x, g, t);
    factor *= alpha_ratio(delta, x.epsilon, gp, hp);
  }
  phase = phase / 2 - Rational(x.b0) * ord_t_at_cusp(s, x, t) / x.D;
  return root_of_unity(frac(phase)) * factor;
}

// C(l) = branch h'/delta - D b0 l / delta^2
inline Rational c_phase(const CuspContext& x, i64 g, i64 t, const Rational& ell, int branch) {
  if (branch != 1 && branch != -1) throw domain_error("branch must be +1 or -1");
  auto [gp, hp] = gh_primed(x, g, t);
  (void)gp;
  return ratio(branch * hp, x.delta) - Rational(x.D * x.b0) * ell / Rational(x.delta * x.delta);
}

// One residue class of special-partition parts: lambda = residue (mod modulus),
// lambda > 0, contributing phase e(C(eps^2 lambda/4) + eps/2) and q^{step*lambda}.
struct PartClass {
  i64 g;
  int branch;
  i64 modulus;
  i64 residue;
  // phase as a power of zeta_{4 delta^2}: k0 + k1 * lambda
  i64 k0, k1;

  i64 root_exponent(i64 lambda, i64 root_modulus) const { return mod(k0 + mod(k1, root_modulus) * mod(lambda, root_modulus), root_modulus); }
};

struct CuspExpansionData {
  Rational ord;
  CyclotomicNumber z;
  Rational step;      // eps^2 D^2 / (4 delta^2)
  i64 root_modulus;   // 4 delta^2
  std::vector<PartClass> classes;
};

// Both branches are kept for every g. When 2g' = 0 (mod delta) the two
// classes coincide and each part occurs once per branch, matching the two
// products of the generalized eta function.
inline std::vector<PartClass> part_classes(const PartitionSpec& s, const CuspContext& x, i64 t) {
  const i64 delta = s.delta(), eps = x.epsilon;
  const i64 m = 4 * delta / (eps * eps);
  const i64 rm = 4 * delta * delta;
  std::vector<PartClass> out;
  for (i64 g : s.parts()) {
    auto [gp, hp] = gh_primed(x, g, t);
    for (int br : {1, -1}) {
      PartClass pc;
      pc.g = g;
      pc.branch = br;
      pc.modulus = m;
      pc.residue = mod(br * (4 * gp / (eps * eps)) + (3 - eps) * delta, m);
      // C(eps^2 l/4) + eps/2 scaled by 4 delta^2
      pc.k0 = mod(br * 4 * delta * mod(hp, delta) + 2 * eps * delta * delta, rm);
      pc.k1 = mod(-x.D * x.b0 * eps * eps, rm);
      out.push_back(pc);
    }
  }
  return out;
}

inline CuspExpansionData cusp_expansion_data(const PartitionSpec& s, const CuspContext& x, i64 t) {
  const i64 delta = s.delta();
  CuspExpansionData e;
  e.ord = ord_t_at_cusp(s, x, t);
  e.z = z_leading(s, x, t);
  e.step = ratio(x.epsilon * x.epsilon * x.D * x.D, 4 * delta * delta);
  e.root_modulus = 4 * delta * delta;
  e.classes = part_classes(s, x, t);
  return e;
}

// W(0..terms-1) from the product form, as exact integer combinations of roots.
inline std::vector<RootSum> w_product_coefficients(const CuspExpansionData& e, i64 terms) {
  std::vector<SparseFactor<Root>> fs;
  for (const auto& pc : e.classes)
    for (i64 lam = pc.residue == 0 ? pc.modulus : pc.residue; lam < terms; lam += pc.modulus)
      fs.push_back({Root{pc.root_exponent(lam, e.root_modulus)}, Rational(lam), 1});
  auto prod = sparse_factor_product<RootSum, Root>(std::span<const SparseFactor<Root>>(fs), Rational(terms),
                                                   RootSum::unit(e.root_modulus));
  std::vector<RootSum> out(static_cast<std::size_t>(terms));
  for (i64 n = 0; n < terms; ++n) out[static_cast<std::size_t>(n)] = n < prod.offset() ? RootSum() : prod.at(n);
  return out;
}

// Z q^ord sum_n W(n) q^{step n}, n < terms, as a series on lattice lcm(Den ord, Den step).
inline QSeries<CyclotomicNumber> assemble_cusp_series(const CuspExpansionData& e,
                                                      const std::vector<CyclotomicNumber>& w) {
  i64 l = lcm(to_i64(e.ord.den()), to_i64(e.step.den()));
  i64 off = to_i64(e.ord * l), st = to_i64(e.step * l);
  i64 terms = static_cast<i64>(w.size());
  std::vector<CyclotomicNumber> c(static_cast<std::size_t>(terms == 0 ? 0 : (terms - 1) * st + 1));
  for (i64 n = 0; n < terms; ++n) c[static_cast<std::size_t>(n * st)] = e.z * w[static_cast<std::size_t>(n)];
  return QSeries<CyclotomicNumber>(l, off, off + terms * st, std::move(c));
}

// Expansion of F_S(tau + t/delta) at the finite cusp a/c in the local parameter,
// through `terms` steps, from the product form.
inline QSeries<CyclotomicNumber> expansion_at_cusp(const PartitionSpec& s, const CuspContext& x, i64 t, i64 terms) {
  if (x.c <= 0) throw domain_error("expansion_at_cusp needs a finite cusp; use f_s_expansion at infinity");
  if (terms < 1) throw domain_error("terms must be positive");
  auto e = cusp_expansion_data(s, x, t);
  auto w = w_product_coefficients(e, terms);
  std::vector<CyclotomicNumber> wc;
  wc.reserve(w.size());
  for (const auto& r : w) wc.push_back(r.to_cyclotomic());
  return assemble_cusp_series(e, wc);
}

}  // namespace shiftpart
