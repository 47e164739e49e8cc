#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "shiftpart/error.hpp"
#include "shiftpart/etaq/cusp_expansion.hpp"

namespace shiftpart {

struct EnumerationLimits {
  i64 max_n = 2000;
  i64 max_nodes = 200'000'000;
};

// Parts of one residue class (a g of S and a branch sign), ascending.
struct ClassParts {
  i64 g;
  int branch;
  std::vector<i64> parts;
  friend bool operator==(const ClassParts&, const ClassParts&) = default;
};

struct SpecialPartition {
  std::vector<ClassParts> classes;  // same order as part_classes()
  i64 total = 0;
  friend bool operator==(const SpecialPartition&, const SpecialPartition&) = default;
};

namespace detail {

struct AdmissiblePart {
  std::size_t cls;
  i64 lambda;
  i64 root;
};

// Depth-first search over subsets of admissible parts with sum n, classes in
// order and parts ascending inside each class. `visit` sees the chosen indices.
class SpecialSearch {
 public:
  SpecialSearch(const std::vector<PartClass>& classes, i64 root_modulus, i64 n, const EnumerationLimits& lim)
      : n_(n), lim_(lim) {
    if (n > lim.max_n)
      throw limit_error("special partitions of n = " + std::to_string(n) + " exceed the enumeration limit " +
                        std::to_string(lim.max_n));
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      const auto& pc = classes[ci];
      for (i64 lam = pc.residue == 0 ? pc.modulus : pc.residue; lam <= n; lam += pc.modulus)
        parts_.push_back({ci, lam, pc.root_exponent(lam, root_modulus)});
    }
    suffix_.assign(parts_.size() + 1, 0);
    for (std::size_t i = parts_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + parts_[i].lambda;
    next_class_.assign(parts_.size(), parts_.size());
    for (std::size_t i = parts_.size(); i-- > 0;)
      next_class_[i] = (i + 1 < parts_.size() && parts_[i + 1].cls == parts_[i].cls) ? next_class_[i + 1] : i + 1;
  }

  const std::vector<AdmissiblePart>& parts() const { return parts_; }

  void run(const std::function<void(const std::vector<std::size_t>&)>& visit) {
    chosen_.clear();
    nodes_ = 0;
    go(0, n_, visit);
  }

 private:
  void go(std::size_t i, i64 rest, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    if (++nodes_ > lim_.max_nodes) throw limit_error("special partition search exceeded the node budget");
    if (rest == 0) {
      visit(chosen_);
      return;
    }
    if (suffix_[i] < rest) return;
    std::size_t j = i;
    while (j < parts_.size()) {
      if (parts_[j].lambda > rest) {
        j = next_class_[j];
        continue;
      }
      chosen_.push_back(j);
      go(j + 1, rest - parts_[j].lambda, visit);
      chosen_.pop_back();
      ++j;
    }
  }

  i64 n_;
  EnumerationLimits lim_;
  std::vector<AdmissiblePart> parts_;
  std::vector<i64> suffix_;
  std::vector<std::size_t> next_class_;
  std::vector<std::size_t> chosen_;
  i64 nodes_ = 0;
};

}  // namespace detail

inline std::vector<SpecialPartition> enumerate_special(const PartitionSpec& s, const CuspContext& x, i64 t, i64 n,
                                                       const EnumerationLimits& lim = {}) {
  if (n < 0) return {};
  auto classes = part_classes(s, x, t);
  detail::SpecialSearch search(classes, 4 * s.delta() * s.delta(), n, lim);
  std::vector<SpecialPartition> out;
  search.run([&](const std::vector<std::size_t>& idx) {
    SpecialPartition sp;
    sp.total = n;
    for (const auto& pc : classes) sp.classes.push_back({pc.g, pc.branch, {}});
    for (std::size_t k : idx) sp.classes[search.parts()[k].cls].parts.push_back(search.parts()[k].lambda);
    out.push_back(std::move(sp));
  });
  std::sort(out.begin(), out.end(), [](const SpecialPartition& a, const SpecialPartition& b) {
    for (std::size_t i = 0; i < a.classes.size(); ++i)
      if (a.classes[i].parts != b.classes[i].parts) return a.classes[i].parts < b.classes[i].parts;
    return false;
  });
  return out;
}

// Twisted count from precomputed part classes: phases accumulated during the
// search, one counter per root of unity.
inline CyclotomicNumber w_twisted(const std::vector<PartClass>& classes, i64 root_modulus, i64 n,
                                  const EnumerationLimits& lim = {}) {
  if (n < 0) return {};
  detail::SpecialSearch search(classes, root_modulus, n, lim);
  std::map<i64, i64> counts;
  search.run([&](const std::vector<std::size_t>& idx) {
    i64 k = 0;
    for (std::size_t j : idx) k += search.parts()[j].root;
    ++counts[mod(k, root_modulus)];
  });
  CyclotomicNumber::Terms raw;
  for (const auto& [k, c] : counts) raw.emplace(k, Rational(c));
  return CyclotomicNumber::from_terms(root_modulus, raw);
}

inline CyclotomicNumber w_twisted(const PartitionSpec& s, const CuspContext& x, i64 t, i64 n,
                                  const EnumerationLimits& lim = {}) {
  return w_twisted(part_classes(s, x, t), 4 * s.delta() * s.delta(), n, lim);
}

// Same value from a materialized list; used to cross-check the accumulating search.
inline CyclotomicNumber w_twisted_materialized(const PartitionSpec& s, const CuspContext& x, i64 t, i64 n,
                                               const EnumerationLimits& lim = {}) {
  CyclotomicNumber acc;
  for (const auto& sp : enumerate_special(s, x, t, n, lim)) {
    Rational phase = 0;
    for (const auto& cp : sp.classes)
      for (i64 lam : cp.parts)
        phase += c_phase(x, cp.g, t, Rational(x.epsilon * x.epsilon * lam) / 4, cp.branch) + ratio(x.epsilon, 2);
    acc += root_of_unity(frac(phase), 4 * s.delta() * s.delta());
  }
  return acc;
}

// n with q^m = q^{ord + step n}; -1 if m is not on that progression.
inline i64 w_index(const CuspExpansionData& e, const Rational& m) {
  if (m < e.ord) return -1;
  Rational n = (m - e.ord) / e.step;
  if (!n.is_integer()) return -1;
  return to_i64(n);
}

// Coefficient of q^m in F_S(tau + t/delta) at a/c: Z W(n), 0 off the progression.
inline CyclotomicNumber y_coeff(const PartitionSpec& s, const CuspContext& x, i64 t, const Rational& m,
                                const EnumerationLimits& lim = {}) {
  Rational ord = ord_t_at_cusp(s, x, t);
  Rational step = ratio(x.epsilon * x.epsilon * x.D * x.D, 4 * s.delta() * s.delta());
  if (m < ord) return {};
  Rational n = (m - ord) / step;
  if (!n.is_integer()) return {};
  return z_leading(s, x, t) * w_twisted(s, x, t, to_i64(n), lim);
}

// sum_{r in R} zeta_delta^{-t r}
inline CyclotomicNumber residue_character_sum(i64 delta, const std::set<i64>& residues, i64 t) {
  CyclotomicNumber::Terms raw;
  for (i64 r : residues) raw[mod(-t * r, delta)] += 1;
  return CyclotomicNumber::from_terms(delta, raw);
}

// X(m) = (1/delta) sum_t (sum_{r in R} zeta_delta^{-t r}) Y^(t)(m): the coefficient of
// q^m at a/c of the part of F_S whose exponents at infinity are = R mod delta.
inline CyclotomicNumber x_combined(const PartitionSpec& s, const std::set<i64>& residues, const CuspContext& x,
                                   const Rational& m, const EnumerationLimits& lim = {}) {
  if (!ord_s(s).is_integer()) throw integrality_error("x_combined needs integral ord_S, got " + ord_s(s).str());
  const i64 delta = s.delta();
  CyclotomicNumber acc;
  if (residues.empty()) return acc;
  for (i64 t = 0; t < delta; ++t) {
    CyclotomicNumber chi = residue_character_sum(delta, residues, t);
    if (chi.is_zero()) continue;
    CyclotomicNumber y = y_coeff(s, x, t, m, lim);
    if (y.is_zero()) continue;
    acc += chi * y;
  }
  return acc / Rational(delta);
}

}  // namespace shiftpart
