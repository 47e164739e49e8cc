#pragma once

#include <array>
#include <string>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/arith.hpp"

namespace shiftpart {

using Matrix2 = std::array<i64, 4>;  // (a, b, c, d)

// Cusp a/c with a completing matrix A = ((a, b), (c, d)) and the data for
// writing delta*A(tau) = A0((D tau - b0)/(delta/D)).
struct CuspContext {
  i64 a = 1, b = 0, c = 0, d = 1;
  i64 delta = 1;
  i64 D = 1;
  i64 b0 = 0, d0 = 0;
  i64 epsilon = 2;

  bool at_infinity() const { return c == 0; }

  Matrix2 a0() const { return {delta * a / D, a * b0 + b * D, c / D, d0 * a}; }

  // Same cusp and matrix, for modulus 2*delta: D -> eps D, b0 -> eps b0, d0 -> (eps/2) d0.
  CuspContext doubled() const {
    CuspContext r = *this;
    r.delta = 2 * delta;
    r.D = epsilon * D;
    r.b0 = epsilon * b0;
    if (epsilon == 1 && d0 % 2 != 0) throw domain_error("doubled context needs even d0 when epsilon = 1");
    r.d0 = epsilon * d0 / 2;
    r.epsilon = gcd(c, 2 * r.delta) / gcd(c, r.delta);
    r.validate();
    return r;
  }

  // Exact checks of every defining relation; throws on failure.
  void validate() const {
    auto fail = [&](const std::string& what) { throw domain_error("invalid cusp context: " + what); };
    if (a * d - b * c != 1) fail("ad - bc != 1");
    if (D != gcd(c, delta)) fail("D != gcd(c, delta)");
    if (epsilon != gcd(c, 2 * delta) / D) fail("epsilon mismatch");
    if (D * d != delta * a * d0 - c * b0) fail("D d != delta a d0 - c b0");
    // A0 * ((D, -b0), (0, delta/D)) must equal ((delta a, delta b), (c, d)) entrywise.
    Matrix2 m = a0();
    i64 e = delta / D;
    Matrix2 prod = {m[0] * D, -m[0] * b0 + m[1] * e, m[2] * D, -m[2] * b0 + m[3] * e};
    Matrix2 want = {delta * a, delta * b, c, d};
    if (prod != want) fail("Moebius identity delta*A = A0*M fails");
    if (m[0] * m[3] - m[1] * m[2] != 1) fail("det A0 != 1");
  }

  friend bool operator==(const CuspContext&, const CuspContext&) = default;
};

// Context from an explicit completion (b, d, b0, d0); validated.
inline CuspContext cusp_context_with(i64 a, i64 b, i64 c, i64 d, i64 delta, i64 b0, i64 d0) {
  if (delta < 1) throw domain_error("delta must be positive");
  CuspContext x;
  x.a = a, x.b = b, x.c = c, x.d = d, x.delta = delta;
  x.D = gcd(c, delta);
  x.epsilon = gcd(c, 2 * delta) / x.D;
  x.b0 = b0, x.d0 = d0;
  x.validate();
  return x;
}

// Canonical context: d in [1, c] with ad = 1 mod c, b = (ad - 1)/c; d0 the
// least nonnegative solution mod c/D, moved to the even one when epsilon = 1
// (c/D is odd then, so adding c/D flips parity).
inline CuspContext cusp_context(i64 a, i64 c, i64 delta) {
  if (delta < 1) throw domain_error("delta must be positive");
  if (a == 0 && c == 0) throw domain_error("cusp (0, 0) is not a cusp");
  if (c < 0) a = -a, c = -c;
  if (gcd(a, c) != 1) throw domain_error("cusp " + std::to_string(a) + "/" + std::to_string(c) + " is not reduced");
  if (c == 0) return cusp_context_with(1, 0, 0, 1, delta, 0, 1);
  i64 d = c == 1 ? 1 : inverse_mod(a, c);
  if (d == 0) d = c;
  i64 b = (a * d - 1) / c;
  i64 D = gcd(c, delta);
  i64 A = delta / D * a, B = c / D;
  // A d0 - B b0 = d
  auto [g, x, y] = egcd(A, B);
  if (g != 1) throw domain_error("internal: delta a/D and c/D not coprime");
  i64 d0 = x * d, b0 = -y * d;
  i64 k = (d0 - mod(d0, B)) / B;
  d0 -= k * B;
  b0 -= k * A;
  i64 eps = gcd(c, 2 * delta) / D;
  if (eps == 1 && d0 % 2 != 0) {
    d0 += B;
    b0 += A;
  }
  return cusp_context_with(a, b, c, d, delta, b0, d0);
}

}  // namespace shiftpart
