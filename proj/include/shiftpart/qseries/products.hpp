#pragma once

#include <span>
#include <thread>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/exact/arith.hpp"
#include "shiftpart/qseries/qseries.hpp"

namespace shiftpart {

// 1 + sign * coefficient * q^exponent
template <class C>
struct SparseFactor {
  C coefficient;
  Rational exponent;
  int sign = 1;
};

namespace detail {

template <class T, class C>
void apply_factors(std::vector<T>& a, std::span<const SparseFactor<C>> factors, i64 l) {
  i64 p = static_cast<i64>(a.size());
  for (const auto& f : factors) {
    i64 e = to_i64(f.exponent * l);
    if (e >= p) continue;
    for (i64 i = p - 1; i >= e; --i) {
      const T& src = a[static_cast<std::size_t>(i - e)];
      if (scalar_traits<T>::is_zero(src)) continue;
      accumulate_factor(a[static_cast<std::size_t>(i)], src, f.coefficient, f.sign);
    }
  }
}

}  // namespace detail

// prod (1 + sign*c*q^e) truncated below q^precision, one factor at a time by
// shifted in-place addition. With threads > 1 the factor list is split into
// contiguous chunks whose partial products are multiplied in chunk order;
// exact arithmetic makes the result identical to the serial one.
template <class T, class C>
QSeries<T> sparse_factor_product(std::span<const SparseFactor<C>> factors, const Rational& precision,
                                 const T& one, unsigned threads = 1) {
  i64 l = to_i64(precision.den());
  for (const auto& f : factors) {
    if (f.exponent.sign() <= 0) throw domain_error("factor exponents must be positive");
    l = lcm(l, to_i64(f.exponent.den()));
  }
  i64 p = to_i64(precision * l);
  if (p <= 0) return QSeries<T>::zero(l, p);
  if (threads <= 1 || factors.size() < 2 * threads) {
    std::vector<T> a(static_cast<std::size_t>(p));
    a[0] = one;
    detail::apply_factors<T, C>(a, factors, l);
    return QSeries<T>(l, 0, p, std::move(a));
  }
  std::vector<QSeries<T>> parts(threads);
  std::vector<std::thread> pool;
  std::size_t chunk = (factors.size() + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    std::size_t lo = std::min(factors.size(), w * chunk), hi = std::min(factors.size(), lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      std::vector<T> a(static_cast<std::size_t>(p));
      a[0] = one;
      detail::apply_factors<T, C>(a, factors.subspan(lo, hi - lo), l);
      parts[w] = QSeries<T>(l, 0, p, std::move(a));
    });
  }
  for (auto& t : pool) t.join();
  QSeries<T> out = parts[0];
  for (unsigned w = 1; w < threads; ++w) out = out * parts[w];
  return out;
}

template <class T>
QSeries<T> sparse_factor_product(const std::vector<SparseFactor<T>>& factors, const Rational& precision,
                                 unsigned threads = 1) {
  return sparse_factor_product<T, T>(std::span<const SparseFactor<T>>(factors), precision,
                                     scalar_traits<T>::one(), threads);
}

// prod_{n>=1} (1 - q^{k n}) below q^precision (integer lattice), from Euler's
// pentagonal number theorem: sum_j (-1)^j q^{k j(3j-1)/2}.
inline QSeries<Integer> euler_product(i64 k, i64 precision) {
  if (k < 1) throw domain_error("euler_product step must be positive");
  if (precision <= 0) return QSeries<Integer>::zero(1, precision);
  std::vector<Integer> c(static_cast<std::size_t>(precision));
  for (i64 j = 0;; ++j) {
    bool any = false;
    for (i64 jj : {j, -j}) {
      i64 e = k * (jj * (3 * jj - 1) / 2);
      if (e < precision) {
        c[static_cast<std::size_t>(e)] = (j % 2 == 0) ? 1 : -1;
        any = true;
      }
      if (j == 0) break;
    }
    if (!any) break;
  }
  return QSeries<Integer>(1, 0, precision, std::move(c));
}

// eta(scale*tau)^power = q^{scale*power/24} prod (1 - q^{scale n})^power.
inline QSeries<Integer> dedekind_eta_expansion(i64 scale, i64 power, const Rational& precision) {
  if (scale < 1 || power < 1) throw domain_error("eta expansion needs positive scale and power");
  Rational lead(Integer(scale * power), Integer(24));
  Rational rest = precision - lead;
  i64 n = rest.sign() <= 0 ? 0 : to_i64(ceil(rest));
  QSeries<Integer> e = euler_product(scale, n);
  QSeries<Integer> acc = e;
  for (i64 i = 1; i < power; ++i) acc = acc * e;
  return acc.times_q_power(lead).truncated_at(precision);
}

}  // namespace shiftpart
