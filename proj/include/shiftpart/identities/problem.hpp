#pragma once

#include <set>
#include <sstream>
#include <string>

#include "shiftpart/error.hpp"
#include "shiftpart/etaq/partition_spec.hpp"

namespace shiftpart {

// Target identity: p_{S1}(n - H) = p_{S2}(n) for n = R (mod delta).
struct IdentityProblem {
  PartitionSpec spec1, spec2;
  std::set<i64> residues;  // mod delta
  i64 h = 0;
  i64 v = 1;
  PartitionSpec spec1p, spec2p;  // v S_i mod v delta
  std::set<i64> residuesp;       // mod v delta
  i64 deltap = 1;

  i64 delta() const { return spec1.delta(); }
};

inline IdentityProblem build_problem(const PartitionSpec& s1, const PartitionSpec& s2, const std::set<i64>& r) {
  if (s1.delta() != s2.delta())
    throw domain_error("specs must share delta (" + std::to_string(s1.delta()) + " vs " + std::to_string(s2.delta()) + ")");
  Rational h = ord_s(s1) - ord_s(s2);
  if (!h.is_integer()) throw integrality_error("H = ord_S1 - ord_S2 = " + h.str() + " is not an integer");
  IdentityProblem p;
  p.spec1 = s1;
  p.spec2 = s2;
  const i64 delta = s1.delta();
  for (i64 x : r) p.residues.insert(mod(x, delta));
  p.h = to_i64(h);
  Rational o2 = ord_s(s2);
  p.v = to_i64(o2.den());
  p.spec1p = s1.scaled(p.v);
  p.spec2p = s2.scaled(p.v);
  p.deltap = p.v * delta;
  i64 shift = to_i64(o2 * p.v);
  for (i64 x : p.residues) p.residuesp.insert(mod(p.v * x + shift, p.deltap));
  return p;
}

// Level of Gamma_{S1,S2}.
inline i64 gamma_level(const IdentityProblem& p) {
  i64 g = gcd(gcd(static_cast<i64>(p.spec1.size()), static_cast<i64>(p.spec2.size())), 12);
  return lcm(checked_mul(p.deltap, p.deltap), 24 * p.deltap / g);
}

// [SL2(Z) : Gamma1(N)] = N^2 prod_{p | N} (1 - 1/p^2); Gamma1(1), Gamma1(2) are taken as the full index.
inline Integer index_gamma1(i64 n) {
  if (n < 1) throw domain_error("index_gamma1 needs N >= 1");
  Integer acc = Integer(n) * n;
  for (i64 p : prime_divisors(n)) acc = acc / (p * p) * (p * p - 1);
  return acc;
}

// floor(index * weight / 12)
inline Integer sturm_bound(i64 n, const Rational& weight) {
  if (weight.sign() < 0) throw domain_error("weight must be nonnegative");
  Rational b = Rational(index_gamma1(n)) * weight / 12;
  return floor(b);
}

// "<key>=<value>" tokens separated by whitespace; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) throw domain_error("malformed config token '" + tok + "'");
      std::string key = tok.substr(0, eq);
      if (kv.count(key)) throw domain_error("duplicate config key '" + key + "'");
      kv[key] = tok.substr(eq + 1);
    }
  }
  return kv;
}

// Residues `r` given modulo `mod` (mod | delta) expanded to residues mod delta.
inline std::set<i64> expand_residues(const std::vector<i64>& r, i64 m, i64 delta) {
  if (m < 1 || delta % m != 0)
    throw domain_error("residue modulus " + std::to_string(m) + " must divide delta = " + std::to_string(delta));
  std::set<i64> out;
  for (i64 x : r)
    for (i64 k = mod(x, m); k < delta; k += m) out.insert(k);
  return out;
}

// delta=24 s1=1,5,7,9 s2=1,7,9,11 r=4 mod=6; unrelated keys are ignored here.
inline IdentityProblem problem_from_config(const std::map<std::string, std::string>& kv) {
  auto need = [&](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw domain_error(std::string("config is missing '") + k + "'");
    return it->second;
  };
  i64 delta = PartitionSpec::parse_int(need("delta"));
  PartitionSpec s1(delta, PartitionSpec::parse_list(need("s1")));
  PartitionSpec s2(delta, PartitionSpec::parse_list(need("s2")));
  auto r = PartitionSpec::parse_list(need("r"));
  i64 m = kv.count("mod") ? PartitionSpec::parse_int(kv.at("mod")) : delta;
  return build_problem(s1, s2, expand_residues(r, m, delta));
}

}  // namespace shiftpart
