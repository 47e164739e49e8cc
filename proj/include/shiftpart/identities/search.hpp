#pragma once

#include <optional>
#include <set>
#include <vector>

#include "shiftpart/identities/certificate.hpp"
#include "shiftpart/partitions/count.hpp"
#include "shiftpart/qseries/products.hpp"

namespace shiftpart {

// All n in [1, bound] with n mod m in `residues` and p_{S1}(n - h) != p_{S2}(n), up to `limit` of them.
inline std::vector<CoefficientWitness> scan_identity(const PartitionSpec& s1, const PartitionSpec& s2, i64 h,
                                                     const std::set<i64>& residues, i64 m, i64 bound,
                                                     std::size_t limit = SIZE_MAX) {
  if (m < 1) throw domain_error("progression modulus must be positive");
  std::vector<CoefficientWitness> out;
  if (bound < 1) return out;
  auto t1 = count_table(s1, bound - std::min<i64>(h, 0));
  auto t2 = count_table(s2, bound);
  for (i64 n = 1; n <= bound && out.size() < limit; ++n) {
    if (!residues.count(mod(n, m))) continue;
    Integer a = n - h >= 0 ? t1[static_cast<std::size_t>(n - h)] : Integer(0);
    const Integer& b = t2[static_cast<std::size_t>(n)];
    if (a != b) out.push_back({n, a, b});
  }
  return out;
}

// Least positive n <= bound in the progression with p_{S1}(n - H) != p_{S2}(n).
inline std::optional<CoefficientWitness> find_counterexample(const PartitionSpec& s1, const PartitionSpec& s2,
                                                             const std::set<i64>& residues, i64 m = 6,
                                                             i64 bound = 10000) {
  Rational h = ord_s(s1) - ord_s(s2);
  if (!h.is_integer()) throw integrality_error("H = " + h.str() + " is not an integer");
  auto w = scan_identity(s1, s2, to_i64(h), residues, m, bound, 1);
  if (w.empty()) return std::nullopt;
  return w.front();
}

// prod over l > 0 with l mod m in `res` of (1 - q^l), below q^prec
inline QSeries<Integer> residue_product(const std::set<i64>& res, i64 m, i64 prec) {
  std::vector<SparseFactor<Integer>> fs;
  for (i64 l = 1; l < prec; ++l)
    if (res.count(mod(l, m))) fs.push_back({Integer(1), Rational(l), -1});
  return sparse_factor_product(fs, Rational(prec));
}

// G11 + q G5 against prod_{n = ±2, ±6, ±8, ±10 (24)} (1 - q^n) through q^precision, and
// vanishing of every q^{6n+4} coefficient of that product. G5, G11 are taken with constant term 1.
inline Certificate alt_identity_check(i64 precision) {
  const i64 prec = precision + 1;
  auto g5 = residue_product({1, 5, 7, 9, 15, 17, 19, 23}, 24, prec);
  auto g11 = residue_product({1, 7, 9, 11, 13, 15, 17, 23}, 24, prec);
  auto rhs = residue_product({2, 6, 8, 10, 14, 16, 18, 22}, 24, prec);
  auto lhs = g11 + g5.times_q_power(Rational(1));
  Certificate cert;
  i64 bad_identity = 0, bad_vanishing = 0;
  for (i64 n = 0; n <= precision; ++n) {
    Integer l = lhs.at(n), r = rhs.at(n);
    if (l != r) {
      if (cert.coefficient_witnesses.size() < 5) cert.coefficient_witnesses.push_back({n, l, r});
      ++bad_identity;
    }
    if (n % 6 == 4 && sgn(r) != 0) {
      if (cert.coefficient_witnesses.size() < 5) cert.coefficient_witnesses.push_back({n, Integer(0), r});
      ++bad_vanishing;
    }
  }
  cert.verdict = bad_identity + bad_vanishing == 0 ? Verdict::proved : Verdict::refuted;
  cert.parameters["precision"] = std::to_string(precision);
  cert.parameters["identity_mismatches"] = std::to_string(bad_identity);
  cert.parameters["nonvanishing_6n+4"] = std::to_string(bad_vanishing);
  return cert;
}

}  // namespace shiftpart
