#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "shiftpart/etaq/cusp_expansion.hpp"
#include "shiftpart/etaq/eta_quotient.hpp"
#include "shiftpart/identities/certificate.hpp"
#include "shiftpart/identities/cusps.hpp"
#include "shiftpart/identities/problem.hpp"
#include "shiftpart/partitions/count.hpp"

namespace shiftpart {

// (F_{S1}(scale tau) eta(eta_scale tau)^eta_power) | S_{T,r}, same for S2, on Gamma1(level).
struct SturmConfig {
  PartitionSpec s1, s2;
  i64 scale = 1;
  i64 eta_scale = 1, eta_power = 0;
  i64 sieve_modulus = 1, sieve_residue = 0;
  i64 level = 1;
  std::optional<i64> bound;  // default: sturm_bound(level, weight)

  Rational weight() const { return Rational(Integer(eta_power), Integer(2)); }
  // exponent of the leading q-power of the eta factor
  Rational eta_lead() const { return Rational(Integer(eta_scale * eta_power), Integer(24)); }
};

// delta=24 s1=1,5,7,9 s2=1,7,9,11 scale=4 eta=24^7 sieve=24,20 level=576 [bound=...]
inline SturmConfig sturm_config_from(const std::map<std::string, std::string>& kv) {
  auto need = [&](const char* k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) throw domain_error(std::string("sturm config is missing '") + k + "'");
    return it->second;
  };
  SturmConfig c;
  i64 delta = PartitionSpec::parse_int(need("delta"));
  c.s1 = PartitionSpec(delta, PartitionSpec::parse_list(need("s1")));
  c.s2 = PartitionSpec(delta, PartitionSpec::parse_list(need("s2")));
  c.scale = PartitionSpec::parse_int(need("scale"));
  const std::string& eta = need("eta");
  auto caret = eta.find('^');
  if (caret == std::string::npos) throw domain_error("eta must look like <scale>^<power>, got '" + eta + "'");
  c.eta_scale = PartitionSpec::parse_int(eta.substr(0, caret));
  c.eta_power = PartitionSpec::parse_int(eta.substr(caret + 1));
  auto sv = PartitionSpec::parse_list(need("sieve"));
  if (sv.size() != 2) throw domain_error("sieve must be <modulus>,<residue>");
  c.sieve_modulus = sv[0];
  c.sieve_residue = sv[1];
  c.level = PartitionSpec::parse_int(need("level"));
  if (kv.count("bound")) c.bound = PartitionSpec::parse_int(kv.at("bound"));
  if (c.scale < 1 || c.eta_scale < 1 || c.eta_power < 0 || c.sieve_modulus < 1 || c.level < 1)
    throw domain_error("sturm config has a nonpositive scale, modulus or level");
  return c;
}

struct HolomorphyReport {
  i64 cusps = 0;
  Rational min_order;  // smallest order of either hatted form over the cusps
  Cusp at{0, 0};
};

// Orders of F_{S_i}(scale tau) eta(eta_scale tau)^p at every cusp of Gamma1(level),
// in the local variable at the cusp; throws holomorphy_error at the first negative one.
inline HolomorphyReport holomorphy_check(const SturmConfig& cfg) {
  HolomorphyReport rep;
  bool first = true;
  PartitionSpec sc[2] = {cfg.s1.scaled(cfg.scale), cfg.s2.scaled(cfg.scale)};
  for (const auto& cu : cusp_representatives(cfg.level)) {
    ++rep.cusps;
    i64 g = gcd(cu.c, cfg.eta_scale);
    Rational eta_ord = Rational(Integer(cfg.eta_power * g * g), Integer(24 * cfg.eta_scale));
    auto x = cusp_context(cu.a, cu.c, sc[0].delta());
    for (const auto& s : sc) {
      Rational o = ord_t_at_cusp(s, x, 0) + eta_ord;
      if (first || o < rep.min_order) {
        rep.min_order = o;
        rep.at = cu;
        first = false;
      }
      if (o.sign() < 0)
        throw holomorphy_error("hatted form " + s.str() + " has order " + o.str() + " at cusp " +
                               std::to_string(cu.a) + "/" + std::to_string(cu.c));
    }
  }
  return rep;
}

struct SturmProgress {
  KnapsackState state[2];
};

struct SturmOptions {
  unsigned threads = 1;
  bool direct_route = true;  // rebuild both series by multiply-then-sieve and demand agreement
  std::optional<SturmProgress> resume;
  std::function<void(const SturmProgress&)> checkpoint;
  i64 checkpoint_every = 10000;
  std::size_t max_witnesses = 5;
};

namespace detail {

// a * prod (1 - q^{k n})^power, truncated below q^prec, for integer-lattice dense vectors.
inline void times_euler_power(std::vector<Integer>& a, i64 k, i64 power) {
  const i64 prec = static_cast<i64>(a.size());
  auto e = euler_product(k, prec);
  std::vector<std::pair<i64, int>> terms;
  for (i64 i = 0; i < prec; ++i)
    if (i >= e.offset() && sgn(e.at(i)) != 0) terms.push_back({i, sgn(e.at(i))});
  for (i64 p = 0; p < power; ++p) {
    // in place from the top: a[n] = sum_j s_j a[n - e_j]
    for (i64 n = prec - 1; n >= 0; --n) {
      Integer acc = 0;
      for (const auto& [ej, sj] : terms) {
        if (ej > n) break;
        const Integer& src = a[static_cast<std::size_t>(n - ej)];
        if (sgn(src) == 0) continue;
        if (sj > 0)
          acc += src;
        else
          acc -= src;
      }
      a[static_cast<std::size_t>(n)] = std::move(acc);
    }
  }
}

}  // namespace detail

// Sieve first, then multiply by the eta factor: valid because every exponent of
// eta(eta_scale tau)^p is = eta_lead (mod T) when T | eta_scale.
inline std::vector<Integer> hatted_sieved_series(const PartitionSpec& s, const SturmConfig& cfg, i64 bound,
                                                 const std::vector<Integer>& counts) {
  const Rational lead = ord_s(s) * cfg.scale, w0 = cfg.eta_lead();
  if (!lead.is_integer() || !w0.is_integer())
    throw integrality_error("hatted series needs integral leading exponents, got " + lead.str() + " and " + w0.str());
  if (cfg.eta_scale % cfg.sieve_modulus != 0)
    throw divisibility_error("sieve-first route needs T | eta scale");
  const i64 l0 = to_i64(lead), w = to_i64(w0), tmod = cfg.sieve_modulus;
  const i64 r = mod(cfg.sieve_residue - w, tmod);
  if (bound < 0) return {};
  // F|S_{T, r - w0} placed at exponent e + w0; holomorphy makes e + w0 >= 0
  std::vector<Integer> a(static_cast<std::size_t>(bound + 1));
  for (i64 n = 0; n < static_cast<i64>(counts.size()); ++n) {
    i64 e = l0 + cfg.scale * n;
    if (e + w > bound) break;
    if (mod(e, tmod) != r || sgn(counts[static_cast<std::size_t>(n)]) == 0) continue;
    if (e + w < 0) throw holomorphy_error("hatted series has a negative exponent " + std::to_string(e + w));
    a[static_cast<std::size_t>(e + w)] = counts[static_cast<std::size_t>(n)];
  }
  detail::times_euler_power(a, cfg.eta_scale, cfg.eta_power);
  return a;
}

// Multiply first, then sieve, through the generic series code.
inline std::vector<Integer> hatted_sieved_series_direct(const PartitionSpec& s, const SturmConfig& cfg, i64 bound,
                                                        unsigned threads = 1) {
  Rational prec(bound + 1);
  auto f = f_s_expansion(s, cfg.scale, prec - cfg.eta_lead(), threads);
  auto eta = cfg.eta_power == 0 ? QSeries<Integer>::monomial(Integer(1), Rational(0), prec - f.valuation())
                                : dedekind_eta_expansion(cfg.eta_scale, cfg.eta_power, prec - f.valuation());
  auto prod = f * eta;
  if (prod.lattice() != 1) throw lattice_error("hatted series is not on the integer lattice");
  if (prod.offset() < 0) throw holomorphy_error("hatted series has negative exponents");
  auto sv = sieve(prod, cfg.sieve_modulus, mod(cfg.sieve_residue, cfg.sieve_modulus));
  std::vector<Integer> out(static_cast<std::size_t>(bound + 1));
  for (i64 e = 0; e <= bound; ++e) out[static_cast<std::size_t>(e)] = sv.at(e);
  return out;
}

inline Certificate verify_identity_sturm(const SturmConfig& cfg, const SturmOptions& opt = {}) {
  if (cfg.s1.delta() != cfg.s2.delta()) throw domain_error("sturm config specs must share delta");
  Certificate cert;
  // level: both F's and the eta factor satisfy the eta-quotient criteria on Gamma1(level)
  for (const auto& q : {EtaQuotient::from_partition_spec(cfg.s1, cfg.scale),
                        EtaQuotient::from_partition_spec(cfg.s2, cfg.scale),
                        EtaQuotient::eta_power(cfg.eta_scale, cfg.eta_power)})
    if (!robins_level_check(q, cfg.level))
      throw divisibility_error("a factor fails the eta-quotient level criteria at N = " + std::to_string(cfg.level));
  auto holo = holomorphy_check(cfg);

  const i64 bound = cfg.bound ? *cfg.bound : to_i64(sturm_bound(cfg.level, cfg.weight()));
  const PartitionSpec* specs[2] = {&cfg.s1, &cfg.s2};
  std::vector<Integer> series[2];

  SturmProgress latest;
  if (opt.resume) latest = *opt.resume;
  std::mutex mu;
  auto build = [&](int i) {
    const i64 w = to_i64(cfg.eta_lead());
    const Rational lead = ord_s(*specs[i]) * cfg.scale;
    Rational nmax_r = (Rational(bound - w) - lead) / cfg.scale;
    i64 nmax = std::max<i64>(to_i64(floor(nmax_r)), 0);
    KnapsackState st;
    {
      std::lock_guard lk(mu);
      st = latest.state[i];
    }
    if (!st.dp.empty() && static_cast<i64>(st.dp.size()) != nmax + 1) st = KnapsackState{};  // stale checkpoint
    auto hook = [&](const KnapsackState& s) {
      if (!opt.checkpoint) return;
      std::lock_guard lk(mu);
      latest.state[i] = s;
      opt.checkpoint(latest);
    };
    auto counts = count_table_resumable(*specs[i], nmax, std::move(st), hook,
                                        std::max<i64>(1, opt.checkpoint_every / cfg.scale));
    series[i] = hatted_sieved_series(*specs[i], cfg, bound, counts);
    if (opt.checkpoint) {
      std::lock_guard lk(mu);
      latest.state[i] = KnapsackState{nmax + 1, std::move(counts)};
      opt.checkpoint(latest);
    }
  };
  if (opt.threads >= 2) {
    std::thread t1(build, 0);
    build(1);
    t1.join();
  } else {
    build(0);
    build(1);
  }

  if (opt.direct_route) {
    for (int i = 0; i < 2; ++i) {
      auto d = hatted_sieved_series_direct(*specs[i], cfg, bound, opt.threads);
      for (i64 e = 0; e <= bound; ++e)
        if (d[static_cast<std::size_t>(e)] != series[i][static_cast<std::size_t>(e)])
          throw error("sturm routes disagree for " + specs[i]->str() + " at q^" + std::to_string(e));
    }
  }

  i64 mismatches = 0;
  for (i64 e = 0; e <= bound; ++e) {
    const auto& a = series[0][static_cast<std::size_t>(e)];
    const auto& b = series[1][static_cast<std::size_t>(e)];
    if (a != b) {
      ++mismatches;
      if (cert.coefficient_witnesses.size() < opt.max_witnesses) cert.coefficient_witnesses.push_back({e, a, b});
    }
  }
  i64 nonzero = 0;
  for (const auto& v : series[0])
    if (sgn(v) != 0) ++nonzero;
  cert.verdict = mismatches == 0 ? Verdict::proved : Verdict::refuted;
  cert.parameters["bound"] = std::to_string(bound);
  cert.parameters["level"] = std::to_string(cfg.level);
  cert.parameters["weight"] = cfg.weight().str();
  cert.parameters["index"] = index_gamma1(cfg.level).get_str();
  cert.parameters["cusps_checked"] = std::to_string(holo.cusps);
  cert.parameters["min_cusp_order"] = holo.min_order.str();
  cert.parameters["mismatches"] = std::to_string(mismatches);
  cert.parameters["nonzero_coefficients"] = std::to_string(nonzero);
  cert.parameters["direct_route"] = opt.direct_route ? "agreed" : "skipped";
  return cert;
}

}  // namespace shiftpart
