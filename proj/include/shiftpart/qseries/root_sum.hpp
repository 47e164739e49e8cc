#pragma once

#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/arith.hpp"
#include "shiftpart/exact/cyclotomic.hpp"

namespace shiftpart {

// A power of zeta_M, used as the coefficient of a product factor.
struct Root {
  i64 k = 0;
};

// Integer combination of M-th roots of unity, kept as a dense count per root
// (the group ring Z[Z/M]). Multiplying by a root is a rotation, so products of
// (1 + zeta^k q^l) factors stay cheap. Modulus 0 marks a zero of unknown modulus.
class RootSum {
 public:
  RootSum() = default;
  explicit RootSum(i64 modulus) : m_(modulus), c_(static_cast<std::size_t>(modulus), 0) {
    if (modulus < 1) throw domain_error("RootSum modulus must be positive");
  }
  static RootSum unit(i64 modulus, i64 k = 0) {
    RootSum r(modulus);
    r.c_[static_cast<std::size_t>(mod(k, modulus))] = 1;
    return r;
  }

  i64 modulus() const { return m_; }
  const std::vector<i64>& counts() const { return c_; }
  bool is_zero() const {
    for (i64 v : c_)
      if (v) return false;
    return true;
  }

  // this += sign * zeta^k * src
  void add_rotated(const RootSum& src, i64 k, int sign) {
    if (src.m_ == 0) return;
    adopt(src.m_);
    std::size_t m = static_cast<std::size_t>(m_);
    std::size_t shift = static_cast<std::size_t>(mod(k, m_));
    for (std::size_t i = 0; i < m; ++i) {
      i64 v = src.c_[i];
      if (!v) continue;
      std::size_t j = i + shift;
      if (j >= m) j -= m;
      c_[j] = checked_add(c_[j], sign > 0 ? v : -v);
    }
  }

  RootSum& operator+=(const RootSum& o) { add_rotated(o, 0, 1); return *this; }
  RootSum& operator-=(const RootSum& o) { add_rotated(o, 0, -1); return *this; }
  friend RootSum operator+(RootSum a, const RootSum& b) { return a += b; }
  friend RootSum operator-(RootSum a, const RootSum& b) { return a -= b; }
  RootSum operator-() const {
    RootSum r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend RootSum operator*(const RootSum& a, const RootSum& b) {
    if (a.m_ == 0 || b.m_ == 0) return {};
    if (a.m_ != b.m_) throw conductor_error("RootSum modulus mismatch");
    RootSum r(a.m_);
    for (i64 i = 0; i < a.m_; ++i)
      if (a.c_[i]) r.add_rotated(b.scaled(a.c_[i]), i, 1);
    return r;
  }
  friend RootSum operator*(const RootSum& a, const Root& z) {
    RootSum r;
    r.add_rotated(a, z.k, 1);
    return r;
  }
  RootSum scaled(i64 f) const {
    RootSum r = *this;
    for (auto& v : r.c_) v = checked_mul(v, f);
    return r;
  }

  friend bool operator==(const RootSum& a, const RootSum& b) {
    if (a.m_ == b.m_) return a.c_ == b.c_;
    if (a.m_ == 0) return b.is_zero();
    if (b.m_ == 0) return a.is_zero();
    return a.to_cyclotomic() == b.to_cyclotomic();
  }

  CyclotomicNumber to_cyclotomic() const {
    if (m_ == 0) return {};
    CyclotomicNumber::Terms raw;
    for (i64 i = 0; i < m_; ++i)
      if (c_[i]) raw.emplace(i, Rational(c_[i]));
    return CyclotomicNumber::from_terms(m_, raw);
  }

 private:
  void adopt(i64 m) {
    if (m_ == m) return;
    if (m_ != 0) throw conductor_error("RootSum modulus mismatch");
    m_ = m;
    c_.assign(static_cast<std::size_t>(m), 0);
  }

  i64 m_ = 0;
  std::vector<i64> c_;
};

}  // namespace shiftpart
