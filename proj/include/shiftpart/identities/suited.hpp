#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "shiftpart/identities/certificate.hpp"
#include "shiftpart/identities/cusps.hpp"
#include "shiftpart/identities/problem.hpp"
#include "shiftpart/partitions/special.hpp"

namespace shiftpart {

// Negative exponents m = ord^(t)_{S_i'} + step n over all t and both specs.
inline std::set<Rational> principal_exponent_set(const IdentityProblem& p, const CuspContext& x) {
  std::set<Rational> out;
  const i64 dp = p.deltap;
  Rational step = ratio(x.epsilon * x.epsilon * x.D * x.D, 4 * dp * dp);
  for (const auto* s : {&p.spec1p, &p.spec2p})
    for (i64 t = 0; t < dp; ++t)
      for (Rational m = ord_t_at_cusp(*s, x, t); m.sign() < 0; m += step) out.insert(m);
  return out;
}

struct CuspComparison {
  std::optional<CuspWitness> witness;
  i64 exponents = 0;  // how many m were compared
};

// Both X series at their principal exponents, in the given context.
inline std::pair<std::map<Rational, CyclotomicNumber>, std::map<Rational, CyclotomicNumber>> principal_x_values(
    const IdentityProblem& p, const CuspContext& x, const EnumerationLimits& lim = {}) {
  const i64 dp = p.deltap, rm = 4 * dp * dp;
  auto ms = principal_exponent_set(p, x);
  std::map<Rational, CyclotomicNumber> xs[2];
  if (ms.empty()) return {xs[0], xs[1]};
  std::vector<std::optional<CyclotomicNumber>> chis(static_cast<std::size_t>(dp));
  const PartitionSpec* specs[2] = {&p.spec1p, &p.spec2p};
  for (int i = 0; i < 2; ++i) {
    for (const auto& m : ms) xs[i][m] = CyclotomicNumber();
    for (i64 t = 0; t < dp; ++t) {
      Rational ord = ord_t_at_cusp(*specs[i], x, t);
      if (ord.sign() >= 0) continue;
      auto& chi = chis[static_cast<std::size_t>(t)];
      if (!chi) chi = residue_character_sum(dp, p.residuesp, t);
      if (chi->is_zero()) continue;
      Rational step = ratio(x.epsilon * x.epsilon * x.D * x.D, 4 * dp * dp);
      CyclotomicNumber lead = *chi * z_leading(*specs[i], x, t);
      auto classes = part_classes(*specs[i], x, t);
      for (Rational m = ord; m.sign() < 0; m += step) {
        i64 n = to_i64((m - ord) / step);
        CyclotomicNumber w = w_twisted(classes, rm, n, lim);
        if (!w.is_zero()) xs[i][m] += lead * w;
      }
    }
    for (auto& [m, v] : xs[i]) v = v / Rational(dp);
  }
  return {xs[0], xs[1]};
}

inline CuspComparison compare_at_cusp(const IdentityProblem& p, const CuspContext& x,
                                      const EnumerationLimits& lim = {}) {
  CuspComparison out;
  auto [x1, x2] = principal_x_values(p, x, lim);
  for (const auto& [m, v1] : x1) {
    ++out.exponents;
    const auto& v2 = x2.at(m);
    if (v1 != v2) {
      out.witness = CuspWitness{x.a, x.c, m, v1, v2};
      break;
    }
  }
  return out;
}

inline CuspComparison compare_at_cusp(const IdentityProblem& p, const Cusp& cu, const EnumerationLimits& lim = {}) {
  return compare_at_cusp(p, cusp_context(cu.a, cu.c, p.deltap), lim);
}

struct SuitedOptions {
  std::optional<std::vector<Cusp>> cusps;  // default: all of Gamma1(gamma_level)
  unsigned threads = 1;
  std::size_t start = 0;          // resume: cusps before this index are taken as already agreeing
  std::size_t block = 32;         // checkpoint granularity
  std::function<void(std::size_t next, i64 exponents)> checkpoint;
  EnumerationLimits limits;
};

// Cusps are handled in blocks; inside a block they run in parallel and the
// first disagreement in cusp order wins, so the result does not depend on scheduling.
inline Certificate check_suited(const IdentityProblem& p, const SuitedOptions& opt = {}) {
  const i64 level = gamma_level(p);
  std::vector<Cusp> cusps = opt.cusps ? *opt.cusps : cusp_representatives(level);
  Certificate cert;
  cert.verdict = Verdict::suited;
  i64 exponents = 0;
  std::size_t done = std::min(opt.start, cusps.size());
  const std::size_t block = std::max<std::size_t>(opt.block, 1);
  const unsigned threads = std::max(1u, opt.threads);
  while (done < cusps.size() && cert.verdict == Verdict::suited) {
    std::size_t end = std::min(cusps.size(), done + block);
    std::vector<CuspComparison> res(end - done);
    std::atomic<std::size_t> next{done};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
      for (std::size_t k; (k = next.fetch_add(1)) < end;) {
        try {
          res[k - done] = compare_at_cusp(p, cusps[k], opt.limits);
        } catch (...) {
          std::lock_guard lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    };
    if (threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
    for (auto& r : res) {
      exponents += r.exponents;
      if (r.witness) {
        cert.verdict = Verdict::not_suited;
        cert.cusp_witnesses.push_back(*r.witness);
        break;
      }
    }
    done = end;
    if (cert.verdict == Verdict::suited && opt.checkpoint) opt.checkpoint(done, exponents);
  }
  cert.parameters["level"] = std::to_string(level);
  cert.parameters["cusps_total"] = std::to_string(cusps.size());
  cert.parameters["resumed_from"] = std::to_string(std::min(opt.start, cusps.size()));
  cert.parameters["exponents_compared"] = std::to_string(exponents);
  cert.parameters["H"] = std::to_string(p.h);
  cert.parameters["v"] = std::to_string(p.v);
  cert.parameters["delta_prime"] = std::to_string(p.deltap);
  std::string rp;
  for (i64 r : p.residuesp) rp += (rp.empty() ? "" : ",") + std::to_string(r);
  cert.parameters["residues_prime"] = rp;
  return cert;
}

}  // namespace shiftpart
