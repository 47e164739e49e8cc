#pragma once

#include <map>
#include <string>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/etaq/partition_spec.hpp"
#include "shiftpart/exact/bernoulli.hpp"
#include "shiftpart/qseries/products.hpp"

namespace shiftpart {

struct EtaAtom {
  i64 delta;
  i64 g;
  Rational exponent;
  friend bool operator==(const EtaAtom&, const EtaAtom&) = default;
};

// prod eta_{delta,g}^{r}. Since eta_{delta,g} = eta_{delta,-g}, g is stored as
// min(g mod delta, delta - g mod delta). Exponents are rational so that a
// plain eta power eta(N tau)^k = eta_{N,0}^{k/2} fits the same criteria.
class EtaQuotient {
 public:
  EtaQuotient() = default;
  explicit EtaQuotient(const std::vector<EtaAtom>& atoms) {
    for (const auto& a : atoms) add(a.delta, a.g, a.exponent);
  }

  void add(i64 delta, i64 g, const Rational& r) {
    if (delta < 1) throw domain_error("eta atom delta must be positive");
    i64 gg = mod(g, delta);
    gg = std::min(gg, delta - gg);
    auto& slot = atoms_[{delta, gg}];
    slot += r;
    if (slot.is_zero()) atoms_.erase({delta, gg});
  }

  std::vector<EtaAtom> atoms() const {
    std::vector<EtaAtom> out;
    for (const auto& [k, r] : atoms_) out.push_back({k.first, k.second, r});
    return out;
  }

  // F_S(v tau) = prod eta_{2v delta, 2v g} / eta_{v delta, v g}
  static EtaQuotient from_partition_spec(const PartitionSpec& s, i64 v = 1) {
    EtaQuotient q;
    for (i64 g : s.parts()) {
      q.add(2 * v * s.delta(), 2 * v * g, 1);
      q.add(v * s.delta(), v * g, -1);
    }
    return q;
  }

  // eta(scale tau)^power
  static EtaQuotient eta_power(i64 scale, i64 power) {
    EtaQuotient q;
    q.add(scale, 0, Rational(Integer(power), Integer(2)));
    return q;
  }

  EtaQuotient operator*(const EtaQuotient& o) const {
    EtaQuotient r = *this;
    for (const auto& [k, e] : o.atoms_) r.add(k.first, k.second, e);
    return r;
  }

  // Weight: only eta_{delta,0} atoms carry weight (eta^2 has weight 1).
  Rational weight() const {
    Rational w = 0;
    for (const auto& [k, r] : atoms_)
      if (k.second == 0) w += r;
    return w;
  }

  // Order at infinity.
  Rational order_at_infinity() const {
    Rational o = 0;
    for (const auto& [k, r] : atoms_)
      o += Rational(k.first) * p2(Rational(Integer(k.second), Integer(k.first))) * r / 2;
    return o;
  }

 private:
  std::map<std::pair<i64, i64>, Rational> atoms_;
};

namespace detail {
inline bool even_integer(const Rational& x) { return x.is_integer() && x.num() % 2 == 0; }
}  // namespace detail

// Sufficient conditions (C1) and (C2) for modularity on Gamma1(N).
inline bool robins_level_check(const EtaQuotient& q, i64 n) {
  Rational c1 = 0, c2 = 0;
  for (const auto& a : q.atoms()) {
    if (n % a.delta != 0)
      throw divisibility_error("atom delta " + std::to_string(a.delta) + " does not divide N = " + std::to_string(n));
    c1 += Rational(a.delta) * p2(Rational(Integer(a.g), Integer(a.delta))) * a.exponent;
    c2 += Rational(Integer(n), Integer(6 * a.delta)) * a.exponent;
  }
  return detail::even_integer(c1) && detail::even_integer(c2);
}

// Smallest multiple of lcm(deltas) passing the check, searched up to `limit`.
inline i64 robins_level(const EtaQuotient& q, i64 limit = 1 << 20) {
  i64 base = 1;
  for (const auto& a : q.atoms()) base = lcm(base, a.delta);
  for (i64 n = base; n <= limit; n += base)
    if (robins_level_check(q, n)) return n;
  throw limit_error("no level found up to " + std::to_string(limit));
}

// eta_{delta,g}(tau) = q^{delta P2(g/delta)/2} prod_{l = ±g mod delta} (1 - q^l)
inline QSeries<Integer> eta_delta_g_expansion(i64 delta, i64 g, const Rational& precision) {
  if (delta < 1 || g < 0 || g >= delta) throw domain_error("eta_delta_g needs 0 <= g < delta");
  Rational lead = Rational(delta) * p2(Rational(Integer(g), Integer(delta))) / 2;
  Rational rest = precision - lead;
  i64 n = rest.sign() <= 0 ? 0 : to_i64(ceil(rest));
  std::vector<SparseFactor<Integer>> fs;
  for (i64 l = 1; l < n; ++l) {
    i64 r = l % delta;
    if (r == g) fs.push_back({Integer(1), Rational(l), -1});
    if (r == (delta - g) % delta) fs.push_back({Integer(1), Rational(l), -1});
  }
  return sparse_factor_product(fs, Rational(n)).times_q_power(lead).truncated_at(precision);
}

// F_S(scale tau) = q^{scale ord_S} sum p_S(n) q^{scale n}
inline QSeries<Integer> f_s_expansion(const PartitionSpec& s, i64 scale, const Rational& precision,
                                      unsigned threads = 1) {
  if (scale < 1) throw domain_error("scale must be positive");
  Rational lead = ord_s(s) * scale;
  Rational rest = (precision - lead) / scale;
  i64 n = rest.sign() <= 0 ? 0 : to_i64(ceil(rest));
  std::vector<SparseFactor<Integer>> fs;
  for (i64 l = 1; l < n; ++l)
    if (s.allows(l)) fs.push_back({Integer(1), Rational(l), 1});
  auto base = sparse_factor_product(fs, Rational(n), threads);
  return base.scaled_argument(scale).times_q_power(lead).truncated_at(precision);
}

}  // namespace shiftpart
