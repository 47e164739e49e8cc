#pragma once

#include <cctype>
#include <concepts>
#include <string>
#include <type_traits>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/cyclotomic.hpp"
#include "shiftpart/exact/rational.hpp"
#include "shiftpart/qseries/root_sum.hpp"

namespace shiftpart {

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Integer> {
  static constexpr int rank = 0;
  static bool is_zero(const Integer& x) { return sgn(x) == 0; }
  static bool is_one(const Integer& x) { return x == 1; }
  static Integer one() { return 1; }
  static void fma(Integer& dst, const Integer& a, const Integer& b) {
    mpz_addmul(dst.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  }
  static std::string str(const Integer& x) { return x.get_str(); }
  static Integer parse(const std::string& s) {
    try {
      return Integer(s);
    } catch (const std::invalid_argument&) {
      throw domain_error("malformed integer '" + s + "'");
    }
  }
};

template <>
struct scalar_traits<Rational> {
  static constexpr int rank = 1;
  static bool is_zero(const Rational& x) { return x.is_zero(); }
  static bool is_one(const Rational& x) { return x == Rational(1); }
  static Rational one() { return 1; }
  static void fma(Rational& dst, const Rational& a, const Rational& b) { dst += a * b; }
  static std::string str(const Rational& x) { return x.str(); }
  static Rational parse(const std::string& s) { return Rational::parse(s); }
};

// Parses the str() form of a CyclotomicNumber: terms like "3/2*E(24)^5", "-E(8)", "7".
inline CyclotomicNumber parse_cyclotomic(const std::string& s) {
  CyclotomicNumber out;
  std::size_t i = 0;
  auto fail = [&]() { throw domain_error("malformed cyclotomic '" + s + "'"); };
  if (s == "0") return out;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') sign = s[i++] == '-' ? -1 : 1;
    std::size_t j = i;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
    Rational coef = 1;
    if (j > i) coef = Rational::parse(s.substr(i, j - i));
    i = j;
    if (i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && s[i] == 'E') {
      if (s.compare(i, 2, "E(") != 0) fail();
      std::size_t close = s.find(')', i);
      if (close == std::string::npos) fail();
      i64 n = std::stoll(s.substr(i + 2, close - i - 2));
      i = close + 1;
      i64 k = 1;
      if (i < s.size() && s[i] == '^') {
        std::size_t e = ++i;
        while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
        if (e == i) fail();
        k = std::stoll(s.substr(i, e - i));
        i = e;
      }
      out += CyclotomicNumber::root(k, n).scaled(sign > 0 ? coef : -coef);
    } else {
      if (j == i && coef == Rational(1) && (i < s.size() && s[i] != '+' && s[i] != '-')) fail();
      out += CyclotomicNumber(sign > 0 ? coef : -coef);
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') fail();
  }
  return out;
}

template <>
struct scalar_traits<CyclotomicNumber> {
  static constexpr int rank = 2;
  static bool is_zero(const CyclotomicNumber& x) { return x.is_zero(); }
  static bool is_one(const CyclotomicNumber& x) { return x == CyclotomicNumber(1); }
  static CyclotomicNumber one() { return CyclotomicNumber(1); }
  static void fma(CyclotomicNumber& dst, const CyclotomicNumber& a, const CyclotomicNumber& b) { dst += a * b; }
  static std::string str(const CyclotomicNumber& x) { return x.str(); }
  static CyclotomicNumber parse(const std::string& s) { return parse_cyclotomic(s); }
};

template <>
struct scalar_traits<RootSum> {
  static constexpr int rank = 3;
  static bool is_zero(const RootSum& x) { return x.is_zero(); }
  static bool is_one(const RootSum&) { return false; }
  static void fma(RootSum& dst, const RootSum& a, const RootSum& b) { dst += a * b; }
  static std::string str(const RootSum& x) { return x.to_cyclotomic().str(); }
};

template <class T>
concept Scalar = requires { scalar_traits<T>::rank; };

// Lifting along Integer -> Rational -> CyclotomicNumber.
template <class To, class From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, RootSum>) {
    static_assert(std::is_same_v<To, CyclotomicNumber>);
    return x.to_cyclotomic();
  } else if constexpr (std::is_same_v<To, Rational>) {
    return Rational(x);
  } else if constexpr (std::is_same_v<To, CyclotomicNumber>) {
    return CyclotomicNumber(Rational(x));
  } else {
    static_assert(sizeof(To) == 0, "unsupported scalar cast");
  }
}

template <class A, class B>
using common_scalar_t = std::conditional_t<(scalar_traits<A>::rank >= scalar_traits<B>::rank), A, B>;

// dst += sign * coef * src, the inner step of a factor product.
template <class T, class C>
inline void accumulate_factor(T& dst, const T& src, const C& coef, int sign) {
  if constexpr (std::is_same_v<T, RootSum> && std::is_same_v<C, Root>) {
    dst.add_rotated(src, coef.k, sign);
  } else if constexpr (std::is_same_v<T, Integer> && std::is_same_v<C, Integer>) {
    if (coef == 1) {
      if (sign > 0) dst += src; else dst -= src;
    } else if (sign > 0) {
      mpz_addmul(dst.get_mpz_t(), src.get_mpz_t(), coef.get_mpz_t());
    } else {
      mpz_submul(dst.get_mpz_t(), src.get_mpz_t(), coef.get_mpz_t());
    }
  } else {
    if (sign > 0) dst += src * coef; else dst -= src * coef;
  }
}

}  // namespace shiftpart
