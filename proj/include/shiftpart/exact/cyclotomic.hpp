#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/arith.hpp"
#include "shiftpart/exact/rational.hpp"

namespace shiftpart {

// Coefficients of Phi_n, lowest degree first. Phi at the radical comes from
// exact division of x^r - 1 by Phi_d (d | r, d < r); then Phi_n(x) = Phi_r(x^(n/r)).
inline const std::vector<Integer>& cyclotomic_polynomial(i64 n) {
  static std::mutex mu;
  static std::map<i64, std::vector<Integer>> cache;
  if (n < 1) throw domain_error("cyclotomic_polynomial needs n >= 1");
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  i64 r = radical(n);
  std::vector<Integer> out;
  if (r != n) {
    const auto& base = cyclotomic_polynomial(r);
    i64 m = n / r;
    out.assign((base.size() - 1) * m + 1, 0);
    for (std::size_t i = 0; i < base.size(); ++i) out[i * m] = base[i];
  } else {
    std::vector<Integer> num(r + 1, 0);
    num[0] = -1;
    num[r] = 1;
    for (i64 d : divisors(r)) {
      if (d == r) continue;
      const auto& den = cyclotomic_polynomial(d);
      // den is monic; long division, remainder must vanish
      std::size_t dd = den.size() - 1;
      std::vector<Integer> quo(num.size() - dd, 0);
      for (std::size_t i = num.size(); i-- > dd;) {
        Integer c = num[i];
        if (c == 0) continue;
        quo[i - dd] = c;
        for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
      }
      for (std::size_t i = 0; i < dd; ++i)
        if (num[i] != 0) throw error("inexact cyclotomic division");
      num = std::move(quo);
    }
    out = std::move(num);
  }
  std::lock_guard lock(mu);
  return cache.emplace(n, std::move(out)).first->second;
}

// Element of Q(zeta_N) stored sparsely on a canonical basis of roots of unity:
// zeta_N^k is a basis element iff, for every prime power p^e || N, the p-part
// j_p of k satisfies j_p >= p^(e-1). Other roots are rewritten through
// 1 + zeta_p + ... + zeta_p^(p-1) = 0. The basis has phi(N) elements, so two
// values at the same conductor are equal iff their term maps are equal.
class CyclotomicNumber {
 public:
  using Terms = std::map<i64, Rational>;

  CyclotomicNumber() = default;
  CyclotomicNumber(const Rational& r) {
    if (!r.is_zero()) terms_.emplace(0, r);
  }
  CyclotomicNumber(int r) : CyclotomicNumber(Rational(r)) {}
  CyclotomicNumber(const Integer& r) : CyclotomicNumber(Rational(r)) {}

  // zeta_N^k
  static CyclotomicNumber root(i64 k, i64 n) {
    Terms t;
    t.emplace(mod(k, n), Rational(1));
    return from_terms(n, std::move(t));
  }

  // sum of coef * zeta_N^k over arbitrary (unreduced) k
  static CyclotomicNumber from_terms(i64 n, const Terms& raw) {
    if (n < 1) throw domain_error("conductor must be positive");
    CyclotomicNumber z;
    z.n_ = n;
    for (const auto& [k, c] : raw) {
      if (c.is_zero()) continue;
      z.terms_[mod(k, n)] += c;
    }
    z.canonicalize();
    return z;
  }

  static CyclotomicNumber from_power_basis(i64 n, const std::vector<Rational>& coeffs) {
    Terms raw;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (!coeffs[i].is_zero()) raw[static_cast<i64>(i)] += coeffs[i];
    return from_terms(n, raw);
  }

  i64 conductor() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  CyclotomicNumber lifted(i64 m) const {
    if (m % n_ != 0) throw conductor_error("cannot lift conductor " + std::to_string(n_) + " to " + std::to_string(m));
    if (m == n_) return *this;
    Terms raw;
    i64 f = m / n_;
    for (const auto& [k, c] : terms_) raw.emplace(k * f, c);
    return from_terms(m, raw);
  }

  // Coefficients on 1, zeta, ..., zeta^(phi(N)-1) modulo Phi_N.
  std::vector<Rational> power_basis() const {
    const auto& phi = cyclotomic_polynomial(n_);
    std::size_t deg = phi.size() - 1;
    std::vector<std::pair<std::size_t, Integer>> nz;
    for (std::size_t i = 0; i < deg; ++i)
      if (phi[i] != 0) nz.emplace_back(i, phi[i]);
    std::vector<Rational> c(std::max<std::size_t>(static_cast<std::size_t>(n_), deg), Rational(0));
    for (const auto& [k, v] : terms_) c[static_cast<std::size_t>(k)] += v;
    for (std::size_t j = c.size(); j-- > deg;) {
      if (c[j].is_zero()) continue;
      Rational v = c[j];
      c[j] = 0;
      for (const auto& [i, p] : nz) c[j - deg + i] -= v * Rational(p);
    }
    c.resize(deg);
    return c;
  }

  CyclotomicNumber conj() const { return galois(-1); }

  // sigma_u : zeta -> zeta^u, gcd(u, N) = 1
  CyclotomicNumber galois(i64 u) const {
    if (gcd(mod(u, n_), n_) != 1) throw domain_error("galois exponent not coprime to conductor");
    Terms raw;
    for (const auto& [k, c] : terms_) raw.emplace(mod(static_cast<__int128>(k) * u % n_, n_), c);
    return from_terms(n_, raw);
  }

  // Rational value if the element lies in Q.
  bool is_rational() const {
    auto pb = power_basis();
    for (std::size_t i = 1; i < pb.size(); ++i)
      if (!pb[i].is_zero()) return false;
    return true;
  }

  // Evaluated in MPFR at a working precision covering `digits` plus the
  // coefficient magnitudes; only the final rounding to double is lossy.
  std::complex<double> to_complex(int digits = 12) const {
    if (digits < 1) throw domain_error("to_complex needs digits >= 1");
    std::size_t mag_bits = 0;
    for (const auto& [k, c] : terms_)
      mag_bits = std::max(mag_bits, mpz_sizeinbase(c.raw().get_num_mpz_t(), 2));
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(64 + 4 * digits + mag_bits + 2 * terms_.size());
    mpfr_t re, im, ang, s, co, v;
    for (mpfr_ptr x : {re, im, ang, s, co, v}) mpfr_init2(x, prec);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
    for (const auto& [k, c] : terms_) {
      mpfr_const_pi(ang, MPFR_RNDN);
      mpfr_mul_si(ang, ang, 2 * k, MPFR_RNDN);
      mpfr_div_si(ang, ang, n_, MPFR_RNDN);
      mpfr_sin_cos(s, co, ang, MPFR_RNDN);
      mpfr_set_q(v, c.raw().get_mpq_t(), MPFR_RNDN);
      mpfr_mul(co, co, v, MPFR_RNDN);
      mpfr_mul(s, s, v, MPFR_RNDN);
      mpfr_add(re, re, co, MPFR_RNDN);
      mpfr_add(im, im, s, MPFR_RNDN);
    }
    std::complex<double> out(mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN));
    for (mpfr_ptr x : {re, im, ang, s, co, v}) mpfr_clear(x);
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      std::string cs = c.str();
      if (!out.empty() && cs[0] != '-') out += "+";
      if (k == 0) {
        out += cs;
        continue;
      }
      if (c == Rational(1)) {
      } else if (c == Rational(-1)) {
        out += "-";
      } else {
        out += cs + "*";
      }
      out += "E(" + std::to_string(n_) + ")";
      if (k != 1) out += "^" + std::to_string(k);
    }
    return out;
  }

  CyclotomicNumber operator-() const {
    CyclotomicNumber z = *this;
    for (auto& [k, c] : z.terms_) c = -c;
    return z;
  }

  friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return combine(a, b, 1);
  }
  friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return combine(a, b, -1);
  }
  CyclotomicNumber& operator+=(const CyclotomicNumber& o) { return *this = *this + o; }
  CyclotomicNumber& operator-=(const CyclotomicNumber& o) { return *this = *this - o; }

  friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.n_ == 1 && a.terms_.size() == 1 && a.terms_.begin()->first == 0) return b.scaled(a.terms_.begin()->second);
    if (b.n_ == 1 && b.terms_.size() == 1 && b.terms_.begin()->first == 0) return a.scaled(b.terms_.begin()->second);
    i64 n = lcm(a.n_, b.n_);
    i64 fa = n / a.n_, fb = n / b.n_;
    Terms raw;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) raw[(ka * fa + kb * fb) % n] += ca * cb;
    return from_terms(n, raw);
  }
  CyclotomicNumber& operator*=(const CyclotomicNumber& o) { return *this = *this * o; }

  CyclotomicNumber scaled(const Rational& r) const {
    if (r.is_zero()) return {};
    CyclotomicNumber z = *this;
    for (auto& [k, c] : z.terms_) c *= r;
    return z;
  }
  friend CyclotomicNumber operator/(const CyclotomicNumber& a, const Rational& r) {
    if (r.is_zero()) throw domain_error("cyclotomic division by zero");
    Rational inv = Rational(1) / r;
    return a.scaled(inv);
  }

  // multiply by zeta_n^k
  CyclotomicNumber times_root(i64 k, i64 n) const {
    if (is_zero()) return {};
    i64 m = lcm(n_, n);
    i64 shift = mod(k, n) * (m / n);
    i64 f = m / n_;
    Terms raw;
    for (const auto& [kk, c] : terms_) raw.emplace(mod(kk * f + shift, m), c);
    return from_terms(m, raw);
  }

  CyclotomicNumber pow(unsigned e) const {
    CyclotomicNumber r(1), b = *this;
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.n_ == b.n_) return a.terms_ == b.terms_;
    i64 n = lcm(a.n_, b.n_);
    return a.lifted(n).terms_ == b.lifted(n).terms_;
  }

 private:
  struct PrimeData {
    i64 p, q, low, c, step;
  };

  static std::vector<PrimeData> prime_data(i64 n) {
    std::vector<PrimeData> out;
    for (auto [p, e] : factorize(n)) {
      i64 q = 1;
      for (int i = 0; i < e; ++i) q *= p;
      i64 cofactor = n / q;
      out.push_back({p, q, q / p, q == 1 ? 0 : inverse_mod(cofactor % q, q), n / p});
    }
    return out;
  }

  void canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    if (n_ == 1) return;
    for (const auto& pd : prime_data(n_)) {
      bool dirty = false;
      for (const auto& [k, c] : terms_)
        if ((k % pd.q) * pd.c % pd.q < pd.low) { dirty = true; break; }
      if (!dirty) continue;
      Terms next;
      for (const auto& [k, c] : terms_) {
        if ((k % pd.q) * pd.c % pd.q >= pd.low) {
          next[k] += c;
          continue;
        }
        for (i64 j = 1; j < pd.p; ++j) next[(k + j * pd.step) % n_] -= c;
      }
      for (auto it = next.begin(); it != next.end();)
        it = it->second.is_zero() ? next.erase(it) : std::next(it);
      terms_ = std::move(next);
    }
  }

  static CyclotomicNumber combine(const CyclotomicNumber& a, const CyclotomicNumber& b, int sign) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return sign > 0 ? b : -b;
    i64 n = lcm(a.n_, b.n_);
    if (n == a.n_ && n == b.n_) {
      CyclotomicNumber z = a;
      for (const auto& [k, c] : b.terms_) {
        auto& slot = z.terms_[k];
        if (sign > 0) slot += c; else slot -= c;
        if (slot.is_zero()) z.terms_.erase(k);
      }
      return z;
    }
    Terms raw;
    i64 fa = n / a.n_, fb = n / b.n_;
    for (const auto& [k, c] : a.terms_) raw[k * fa] += c;
    for (const auto& [k, c] : b.terms_) raw[k * fb] += sign > 0 ? c : -c;
    return from_terms(n, raw);
  }

  i64 n_ = 1;
  Terms terms_;
};

// e(x) as an element of conductor n; Den(x) must divide n.
inline CyclotomicNumber root_of_unity(const Rational& x, i64 n) {
  if (n < 1) throw domain_error("conductor must be positive");
  Integer scaled_num = x.num() * n;
  if (!mpz_divisible_p(scaled_num.get_mpz_t(), x.den().get_mpz_t()))
    throw conductor_error("denominator of " + x.str() + " does not divide conductor " + std::to_string(n));
  Integer k = scaled_num / x.den();
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), k.get_mpz_t(), static_cast<unsigned long>(n));
  return CyclotomicNumber::root(r.get_si(), n);
}

// e(x) at the smallest conductor, Den(x).
inline CyclotomicNumber root_of_unity(const Rational& x) { return root_of_unity(x, to_i64(x.den())); }

inline std::string to_string(const CyclotomicNumber& z) { return z.str(); }

}  // namespace shiftpart
