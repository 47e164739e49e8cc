#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "shiftpart/error.hpp"

namespace shiftpart {

using Integer = mpz_class;

// Exact rational in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}
  Rational(long v) : q_(v) {}
  Rational(long long v) : q_(static_cast<long>(v)) {}
  Rational(const Integer& v) : q_(v) {}
  Rational(const Integer& num, const Integer& den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Accepts "p", "p/q", with optional sign.
  static Rational parse(std::string_view s) {
    std::string str(s);
    auto slash = str.find('/');
    try {
      if (slash == std::string::npos) return Rational(Integer(str));
      return Rational(Integer(str.substr(0, slash)), Integer(str.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw domain_error("malformed rational '" + str + "'");
    }
  }

  Integer num() const { return q_.get_num(); }
  Integer den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  std::string str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }
  double to_double() const { return q_.get_d(); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw domain_error("rational division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class q_;
};

inline Integer floor(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.raw().get_num_mpz_t(), x.raw().get_den_mpz_t());
  return r;
}

// {x} in [0, 1).
inline Rational frac(const Rational& x) { return x - Rational(floor(x)); }

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

// Narrowing helpers; throw instead of silently truncating.
inline std::int64_t to_i64(const Integer& z) {
  if (!z.fits_slong_p()) throw overflow_error("integer does not fit in 64 bits: " + z.get_str());
  return z.get_si();
}

inline std::int64_t to_i64(const Rational& x) {
  if (!x.is_integer()) throw integrality_error("expected an integer, got " + x.str());
  return to_i64(x.num());
}

inline std::string to_string(const Integer& z) { return z.get_str(); }
inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace shiftpart

template <>
struct std::hash<shiftpart::Rational> {
  std::size_t operator()(const shiftpart::Rational& x) const {
    std::size_t h1 = mpz_get_ui(x.raw().get_num_mpz_t());
    std::size_t h2 = mpz_get_ui(x.raw().get_den_mpz_t());
    return h1 * 1000003u ^ h2 ^ static_cast<std::size_t>(x.sign() + 1);
  }
};
