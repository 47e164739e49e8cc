#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shiftpart/exact/cyclotomic.hpp"

namespace shiftpart {

enum class Verdict { suited, not_suited, proved, refuted };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::suited: return "suited";
    case Verdict::not_suited: return "not-suited";
    case Verdict::proved: return "proved";
    case Verdict::refuted: return "refuted";
  }
  return "?";
}

inline Verdict verdict_from_string(const std::string& s) {
  if (s == "suited") return Verdict::suited;
  if (s == "not-suited") return Verdict::not_suited;
  if (s == "proved") return Verdict::proved;
  if (s == "refuted") return Verdict::refuted;
  throw domain_error("unknown verdict '" + s + "'");
}

// X_{S1',R'}(a/c; m) != X_{S2',R'}(a/c; m)
struct CuspWitness {
  i64 a, c;
  Rational m;
  CyclotomicNumber x1, x2;
};

// coefficient of q^index differs (sturm) or p_{S1}(n - H) != p_{S2}(n) (counterexample)
struct CoefficientWitness {
  i64 index;
  Integer v1, v2;
};

struct Certificate {
  Verdict verdict = Verdict::proved;
  std::vector<CuspWitness> cusp_witnesses;
  std::vector<CoefficientWitness> coefficient_witnesses;
  std::map<std::string, std::string> parameters;

  bool positive() const { return verdict == Verdict::suited || verdict == Verdict::proved; }
};

}  // namespace shiftpart
