#pragma once

#include "shiftpart/exact/rational.hpp"

namespace shiftpart {

// Sawtooth: {x} - 1/2 off the integers, 0 on them.
inline Rational p1(const Rational& x) {
  if (x.is_integer()) return 0;
  return frac(x) - Rational(Integer(1), Integer(2));
}

inline Rational p2(const Rational& x) {
  Rational f = frac(x);
  return f * f - f + Rational(Integer(1), Integer(6));
}

}  // namespace shiftpart
