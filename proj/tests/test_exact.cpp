#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "shiftpart/exact/arith.hpp"
#include "shiftpart/exact/bernoulli.hpp"
#include "shiftpart/exact/cyclotomic.hpp"
#include "shiftpart/exact/rational.hpp"
#include "oracle.hpp"

using namespace shiftpart;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-500, 500), den(1, 60);
  return R(num(rng), den(rng));
}

CyclotomicNumber random_cyclo(std::mt19937_64& rng, i64 n) {
  std::uniform_int_distribution<i64> k(0, n - 1);
  std::uniform_int_distribution<int> cnt(0, 4);
  CyclotomicNumber z;
  int m = cnt(rng);
  for (int i = 0; i < m; ++i) z += CyclotomicNumber::root(k(rng), n).scaled(random_rational(rng));
  return z;
}

}  // namespace

TEST(Rational, LowestTermsAndParse) {
  Rational x(Integer(6), Integer(-4));
  EXPECT_EQ(x.str(), "-3/2");
  EXPECT_EQ(Rational::parse("10/4"), R(5, 2));
  EXPECT_EQ(Rational::parse("-7").str(), "-7");
  EXPECT_THROW(Rational::parse("1/0"), domain_error);
  EXPECT_THROW(Rational::parse("x"), domain_error);
  EXPECT_EQ(floor(R(-3, 4)), -1);
  EXPECT_EQ(frac(R(-3, 4)), R(1, 4));
}

TEST(Bernoulli, P1Examples) {
  EXPECT_EQ(p1(0), 0);
  EXPECT_EQ(p1(R(1, 2)), 0);
  EXPECT_EQ(p1(R(-3, 4)), R(-1, 4));
}

TEST(Bernoulli, P2Examples) {
  EXPECT_EQ(p2(0), R(1, 6));
  EXPECT_EQ(p2(R(1, 2)), R(-1, 12));
  EXPECT_EQ(p2(R(1, 24)), R(73, 576));
}

TEST(Bernoulli, Periodicity) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    Rational x = random_rational(rng);
    EXPECT_EQ(p1(x + 1), p1(x));
    EXPECT_EQ(p2(x + 1), p2(x));
    // p2 is even, so p2(x) = p2(-x) always; p1 is odd off the integers.
    EXPECT_EQ(p2(-x), p2(x));
    EXPECT_EQ(p1(-x), -p1(x));
  }
}

TEST(Arith, DedekindSumMatchesDefinition) {
  for (i64 k = 1; k <= 40; ++k)
    for (i64 h = -k; h <= 2 * k; ++h)
      if (gcd(h, k) == 1) {
        EXPECT_EQ(dedekind_sum(h, k), oracle::dedekind_sum_naive(h, k)) << h << "/" << k;
      }
}

TEST(Arith, Divisors) {
  EXPECT_EQ(divisors(12), (std::vector<i64>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(euler_phi(576), 192);
  EXPECT_EQ(inverse_mod(7, 24), 7);
}

TEST(Cyclotomic, PolynomialSmall) {
  auto v = [](std::vector<long> c) {
    std::vector<Integer> o;
    for (long x : c) o.emplace_back(x);
    return o;
  };
  EXPECT_EQ(cyclotomic_polynomial(1), v({-1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(6), v({1, -1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(12), v({1, 0, -1, 0, 1}));
  // Phi_105 is the first with a coefficient -2
  const auto& p = cyclotomic_polynomial(105);
  EXPECT_EQ(p.size(), 49u);
  EXPECT_EQ(p[7], -2);
  EXPECT_EQ(cyclotomic_polynomial(9216).size(), 3073u);
}

TEST(Cyclotomic, PolynomialRootCheck) {
  // Phi_n(zeta_n) = 0 numerically
  for (i64 n : {5, 8, 9, 12, 15, 30, 36, 48}) {
    const auto& p = cyclotomic_polynomial(n);
    std::complex<double> z = std::polar(1.0, 2 * M_PI / n), acc = 0, zk = 1;
    for (const auto& c : p) acc += c.get_d() * zk, zk *= z;
    EXPECT_LT(std::abs(acc), 1e-9) << n;
  }
}

TEST(Cyclotomic, RootOfUnityExamples) {
  EXPECT_EQ(root_of_unity(0, 7), CyclotomicNumber(1));
  EXPECT_EQ(root_of_unity(R(1, 2), 2), CyclotomicNumber(-1));
  EXPECT_TRUE((root_of_unity(R(1, 3), 3) + root_of_unity(R(2, 3), 3) + root_of_unity(0, 3)).is_zero());
  EXPECT_THROW(root_of_unity(R(1, 5), 12), conductor_error);
}

TEST(Cyclotomic, ToComplexExamples) {
  auto one = CyclotomicNumber(1).to_complex(12);
  EXPECT_NEAR(one.real(), 1.0, 1e-12);
  EXPECT_NEAR(one.imag(), 0.0, 1e-12);
  auto i = CyclotomicNumber::root(1, 4).to_complex(12);
  EXPECT_NEAR(i.real(), 0.0, 1e-12);
  EXPECT_NEAR(i.imag(), 1.0, 1e-12);
  auto m = (CyclotomicNumber::root(1, 3) + CyclotomicNumber::root(2, 3)).to_complex(12);
  EXPECT_NEAR(m.real(), -1.0, 1e-12);
  EXPECT_NEAR(m.imag(), 0.0, 1e-12);
}

TEST(Cyclotomic, CanonicalEqualityKnownPairs) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> nn(1, 60);
  for (int it = 0; it < 500; ++it) {
    i64 n = nn(rng);
    std::uniform_int_distribution<i64> kk(0, 2 * n);
    i64 k = kk(rng);
    // zeta_{2n}^{2k} = zeta_n^k and -zeta_{2n}^{k} = zeta_{2n}^{k+n}
    EXPECT_EQ(CyclotomicNumber::root(2 * k, 2 * n), CyclotomicNumber::root(k, n));
    EXPECT_EQ(-CyclotomicNumber::root(k, 2 * n), CyclotomicNumber::root(k + n, 2 * n));
  }
  EXPECT_EQ(CyclotomicNumber::root(1, 6), -CyclotomicNumber::root(2, 3));
}

TEST(Cyclotomic, PowerBasisAgreesWithCanonicalForm) {
  std::mt19937_64 rng(11);
  for (i64 n : {1, 2, 3, 4, 6, 8, 9, 12, 15, 24, 30, 36, 45, 60}) {
    for (int it = 0; it < 20; ++it) {
      CyclotomicNumber a = random_cyclo(rng, n).lifted(n), b = random_cyclo(rng, n).lifted(n);
      auto pa = a.power_basis(), pb = b.power_basis();
      EXPECT_EQ(pa.size(), static_cast<std::size_t>(euler_phi(n)));
      EXPECT_EQ(a == b, pa == pb);
      EXPECT_EQ(CyclotomicNumber::from_power_basis(n, pa), a);
      // difference via power basis equals power basis of difference
      auto pd = (a - b).lifted(n).power_basis();
      for (std::size_t i = 0; i < pd.size(); ++i) EXPECT_EQ(pd[i], pa[i] - pb[i]);
    }
  }
}

TEST(Cyclotomic, CanonicalBasisSize) {
  // zero iff zero: sum of all roots of each order d > 1 vanishes
  for (i64 n : {12, 18, 20, 24, 30, 96}) {
    for (i64 d : divisors(n)) {
      CyclotomicNumber s;
      for (i64 k = 0; k < d; ++k) s += CyclotomicNumber::root(k * (n / d), n);
      if (d == 1) EXPECT_EQ(s, CyclotomicNumber(1));
      else EXPECT_TRUE(s.is_zero()) << n << " " << d;
    }
  }
}

TEST(Cyclotomic, RingAxioms) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 5);
  const i64 ns[] = {3, 4, 8, 12, 20, 36};
  for (int it = 0; it < 200; ++it) {
    auto a = random_cyclo(rng, ns[pick(rng)]);
    auto b = random_cyclo(rng, ns[pick(rng)]);
    auto c = random_cyclo(rng, ns[pick(rng)]);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Cyclotomic, RootsCompose) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-100, 100), den(1, 30);
  for (int it = 0; it < 300; ++it) {
    Rational x = R(num(rng), den(rng)), y = R(num(rng), den(rng));
    EXPECT_EQ(root_of_unity(x) * root_of_unity(y), root_of_unity(x + y));
    i64 n = to_i64(x.den());
    EXPECT_EQ(root_of_unity(x, n).pow(static_cast<unsigned>(n)), CyclotomicNumber(1));
  }
}

TEST(Cyclotomic, LiftRoundTrip) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    auto a = random_cyclo(rng, 12);
    auto b = a.lifted(72);
    EXPECT_EQ(b.conductor(), 72);
    EXPECT_EQ(a, b);
    auto ca = a.to_complex(10), cb = b.to_complex(10);
    EXPECT_LT(std::abs(ca - cb), 1e-10);
  }
}

TEST(Cyclotomic, ToComplexIsHomomorphism) {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 200; ++it) {
    auto a = random_cyclo(rng, 24), b = random_cyclo(rng, 15);
    auto za = a.to_complex(10), zb = b.to_complex(10);
    double scale = std::max(1.0, std::abs(za) * std::abs(zb) + std::abs(za) + std::abs(zb));
    EXPECT_LT(std::abs((a * b).to_complex(10) - za * zb), 1e-10 * scale);
    EXPECT_LT(std::abs((a + b).to_complex(10) - za - zb), 1e-10 * scale);
    EXPECT_LT(std::abs(a.conj().to_complex(10) - std::conj(za)), 1e-10 * scale);
  }
}
