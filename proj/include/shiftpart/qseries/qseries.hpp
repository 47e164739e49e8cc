#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/arith.hpp"
#include "shiftpart/exact/cyclotomic.hpp"
#include "shiftpart/exact/rational.hpp"
#include "shiftpart/qseries/scalar_traits.hpp"

namespace shiftpart {

// Truncated Laurent series sum_i c_i q^{(offset+i)/L}, valid for exponents
// below precision/L. After every operation the first stored coefficient is
// nonzero; an all-zero series has offset == precision and no coefficients.
template <class T>
class QSeries {
 public:
  using traits = scalar_traits<T>;

  QSeries() = default;
  QSeries(i64 lattice, i64 offset, i64 precision, std::vector<T> coeffs)
      : l_(lattice), off_(offset), prec_(precision), c_(std::move(coeffs)) {
    if (l_ < 1) throw lattice_error("lattice denominator must be positive");
    if (prec_ < off_) {
      off_ = prec_;
      c_.clear();
    }
    c_.resize(static_cast<std::size_t>(prec_ - off_));
    normalize();
  }

  static QSeries zero(i64 lattice, i64 precision) { return QSeries(lattice, precision, precision, {}); }

  // c * q^e, valid below q^prec
  static QSeries monomial(const T& c, const Rational& e, const Rational& prec) {
    i64 l = lcm(to_i64(e.den()), to_i64(prec.den()));
    i64 en = to_i64(e * l), pn = to_i64(prec * l);
    if (en >= pn) return zero(l, pn);
    return QSeries(l, en, pn, std::vector<T>{c});
  }

  i64 lattice() const { return l_; }
  i64 offset() const { return off_; }
  i64 precision() const { return prec_; }
  const std::vector<T>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  Rational valuation() const { return Rational(Integer(off_), Integer(l_)); }
  Rational precision_exponent() const { return Rational(Integer(prec_), Integer(l_)); }

  // Coefficient of q^{n/L}.
  T at(i64 n) const {
    if (n >= prec_) throw precision_error("coefficient at " + std::to_string(n) + "/" + std::to_string(l_) +
                                          " is beyond precision " + std::to_string(prec_) + "/" + std::to_string(l_));
    if (n < off_) return zero_scalar();
    return c_[static_cast<std::size_t>(n - off_)];
  }

  T coefficient(const Rational& e) const {
    Rational n = e * l_;
    if (e >= precision_exponent()) throw precision_error("coefficient of q^" + e.str() + " is beyond precision");
    if (!n.is_integer()) return zero_scalar();
    return at(to_i64(n));
  }

  // Nonzero terms as (exponent, coefficient).
  std::vector<std::pair<Rational, T>> terms() const {
    std::vector<std::pair<Rational, T>> out;
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!traits::is_zero(c_[i]))
        out.emplace_back(Rational(Integer(off_ + static_cast<i64>(i)), Integer(l_)), c_[i]);
    return out;
  }

  QSeries lifted(i64 m) const {
    if (m % l_ != 0) throw lattice_error("cannot lift lattice " + std::to_string(l_) + " to " + std::to_string(m));
    if (m == l_) return *this;
    i64 f = m / l_;
    std::vector<T> c(c_.empty() ? 0 : (c_.size() - 1) * static_cast<std::size_t>(f) + 1, zero_scalar());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i * static_cast<std::size_t>(f)] = c_[i];
    return QSeries(m, off_ * f, prec_ * f, std::move(c));
  }

  QSeries truncated(i64 precision) const {
    if (precision > prec_) throw precision_error("cannot raise precision by truncation");
    std::vector<T> c(c_.begin(), c_.begin() + std::max<i64>(0, std::min<i64>(static_cast<i64>(c_.size()), precision - off_)));
    return QSeries(l_, off_, precision, std::move(c));
  }

  QSeries truncated_at(const Rational& e) const {
    i64 l = lcm(l_, to_i64(e.den()));
    QSeries s = lifted(l);
    return s.truncated(to_i64(e * l));
  }

  // f(k tau) for k >= 1.
  QSeries scaled_argument(i64 k) const {
    if (k < 1) throw domain_error("argument scale must be positive");
    i64 g = gcd(l_, k);
    i64 step = k / g, l = l_ / g;
    std::vector<T> c(c_.empty() ? 0 : (c_.size() - 1) * static_cast<std::size_t>(step) + 1, zero_scalar());
    for (std::size_t i = 0; i < c_.size(); ++i) c[i * static_cast<std::size_t>(step)] = c_[i];
    return QSeries(l, off_ * step, prec_ * step, std::move(c));
  }

  // q^s * f
  QSeries times_q_power(const Rational& s) const {
    i64 l = lcm(l_, to_i64(s.den()));
    QSeries r = lifted(l);
    i64 sh = to_i64(s * l);
    r.off_ += sh;
    r.prec_ += sh;
    return r;
  }

  QSeries scaled(const T& k) const {
    std::vector<T> c = c_;
    for (auto& x : c) x = x * k;
    return QSeries(l_, off_, prec_, std::move(c));
  }

  template <class U>
  QSeries<U> cast() const {
    std::vector<U> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(scalar_cast<U>(x));
    return QSeries<U>(l_, off_, prec_, std::move(c));
  }

  QSeries operator-() const {
    std::vector<T> c = c_;
    for (auto& x : c) x = -x;
    return QSeries(l_, off_, prec_, std::move(c));
  }

  friend QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b, 1); }
  friend QSeries operator-(const QSeries& a, const QSeries& b) { return add(a, b, -1); }

  friend QSeries operator*(const QSeries& a0, const QSeries& b0) {
    i64 l = lcm(a0.l_, b0.l_);
    QSeries a = a0.lifted(l), b = b0.lifted(l);
    i64 prec = std::min(a.prec_ + b.off_, b.prec_ + a.off_);
    i64 off = a.off_ + b.off_;
    if (prec <= off) return zero(l, prec);
    std::vector<T> c(static_cast<std::size_t>(prec - off), zero_scalar());
    std::vector<std::size_t> nb;
    for (std::size_t j = 0; j < b.c_.size(); ++j)
      if (!traits::is_zero(b.c_[j])) nb.push_back(j);
    for (std::size_t i = 0; i < a.c_.size() && i < c.size(); ++i) {
      if (traits::is_zero(a.c_[i])) continue;
      for (std::size_t j : nb) {
        if (i + j >= c.size()) break;
        traits::fma(c[i + j], a.c_[i], b.c_[j]);
      }
    }
    return QSeries(l, off, prec, std::move(c));
  }

  QSeries& operator+=(const QSeries& o) { return *this = *this + o; }
  QSeries& operator-=(const QSeries& o) { return *this = *this - o; }
  QSeries& operator*=(const QSeries& o) { return *this = *this * o; }

  // Same value and same precision (compared on a common lattice).
  friend bool operator==(const QSeries& a, const QSeries& b) {
    if (a.l_ == b.l_) return a.off_ == b.off_ && a.prec_ == b.prec_ && a.c_ == b.c_;
    i64 l = lcm(a.l_, b.l_);
    return a.lifted(l) == b.lifted(l);
  }

  // Line-oriented text: header, then "numerator coefficient" per nonzero term.
  std::string to_text() const {
    std::ostringstream os;
    os << "L=" << l_ << " offset=" << off_ << " precision=" << prec_ << "\n";
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!traits::is_zero(c_[i])) os << off_ + static_cast<i64>(i) << " " << traits::str(c_[i]) << "\n";
    return os.str();
  }

  static QSeries from_text(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw domain_error("empty series text");
    i64 l = 0, off = 0, prec = 0;
    if (std::sscanf(header.c_str(), "L=%ld offset=%ld precision=%ld", &l, &off, &prec) != 3)
      throw domain_error("malformed series header '" + header + "'");
    std::vector<T> c(static_cast<std::size_t>(std::max<i64>(0, prec - off)), zero_scalar());
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      i64 n;
      std::string v;
      if (!(ls >> n >> v)) throw domain_error("malformed series line '" + line + "'");
      if (n < off || n >= prec) throw domain_error("series term outside header range");
      c[static_cast<std::size_t>(n - off)] = traits::parse(v);
    }
    return QSeries(l, off, prec, std::move(c));
  }

  static T zero_scalar() { return T(); }

 private:
  static QSeries add(const QSeries& a0, const QSeries& b0, int sign) {
    i64 l = lcm(a0.l_, b0.l_);
    QSeries a = a0.lifted(l), b = b0.lifted(l);
    i64 prec = std::min(a.prec_, b.prec_);
    i64 off = std::min(a.off_, b.off_);
    if (off >= prec) return zero(l, prec);
    std::vector<T> c(static_cast<std::size_t>(prec - off), zero_scalar());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      i64 n = a.off_ + static_cast<i64>(i);
      if (n >= prec) break;
      c[static_cast<std::size_t>(n - off)] = a.c_[i];
    }
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      i64 n = b.off_ + static_cast<i64>(i);
      if (n >= prec) break;
      auto& slot = c[static_cast<std::size_t>(n - off)];
      if (sign > 0) slot += b.c_[i]; else slot -= b.c_[i];
    }
    return QSeries(l, off, prec, std::move(c));
  }

  void normalize() {
    std::size_t lead = 0;
    while (lead < c_.size() && traits::is_zero(c_[lead])) ++lead;
    if (lead == c_.size()) {
      off_ = prec_;
      c_.clear();
      return;
    }
    if (lead) {
      c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
      off_ += static_cast<i64>(lead);
    }
  }

  i64 l_ = 1, off_ = 0, prec_ = 0;
  std::vector<T> c_;
};

template <class A, class B>
  requires(!std::is_same_v<A, B>)
auto operator+(const QSeries<A>& a, const QSeries<B>& b) {
  using C = common_scalar_t<A, B>;
  return a.template cast<C>() + b.template cast<C>();
}

template <class A, class B>
  requires(!std::is_same_v<A, B>)
auto operator-(const QSeries<A>& a, const QSeries<B>& b) {
  using C = common_scalar_t<A, B>;
  return a.template cast<C>() - b.template cast<C>();
}

template <class A, class B>
  requires(!std::is_same_v<A, B>)
auto operator*(const QSeries<A>& a, const QSeries<B>& b) {
  using C = common_scalar_t<A, B>;
  return a.template cast<C>() * b.template cast<C>();
}

// Keeps the coefficients of q^n with n = r (mod T); integer lattice only.
template <class T>
QSeries<T> sieve(const QSeries<T>& f, i64 modulus, i64 residue) {
  if (f.lattice() != 1) throw lattice_error("sieve needs integer exponents (L = 1), got L = " + std::to_string(f.lattice()));
  if (modulus < 1) throw domain_error("sieve modulus must be positive");
  std::vector<T> c = f.coefficients();
  i64 r = mod(residue, modulus);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (mod(f.offset() + static_cast<i64>(i), modulus) != r) c[i] = T();
  return QSeries<T>(1, f.offset(), f.precision(), std::move(c));
}

// f(tau + x): the coefficient of q^e picks up e(e * x).
inline QSeries<CyclotomicNumber> shift_argument(const QSeries<CyclotomicNumber>& f, const Rational& x) {
  std::vector<CyclotomicNumber> c = f.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    Rational e(Integer(f.offset() + static_cast<i64>(i)), Integer(f.lattice()));
    c[i] = c[i] * root_of_unity(frac(e * x));
  }
  return QSeries<CyclotomicNumber>(f.lattice(), f.offset(), f.precision(), std::move(c));
}

}  // namespace shiftpart
