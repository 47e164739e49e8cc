// shiftpart command line front end. One JSON record per invocation on stdout
// (or --output); timings and progress go to stderr only.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftpart/etaq/cusp_expansion.hpp"
#include "shiftpart/etaq/eta_quotient.hpp"
#include "shiftpart/identities/search.hpp"
#include "shiftpart/identities/sturm.hpp"
#include "shiftpart/identities/suited.hpp"
#include "shiftpart/partitions/count.hpp"
#include "shiftpart/partitions/special.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace shiftpart;

namespace {

constexpr int kCheckpointVersion = 1;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// sorted key=value lines plus the command; the digest of this names result files
std::string canonical_config(const std::string& command, const std::map<std::string, std::string>& kv) {
  std::string out = "command=" + command + "\n";
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

fs::path results_dir() {
  const char* env = std::getenv("SHIFTPART_RESULTS_DIR");
  fs::path dir = env && *env ? fs::path(env) : fs::path("results");
  fs::create_directories(dir);
  return dir;
}

void write_atomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

// {format, version, config_digest, payload, payload_digest}
struct CheckpointFile {
  fs::path path;
  std::string config_digest;

  void save(const json& payload) const {
    json j;
    j["format"] = "shiftpart-checkpoint";
    j["version"] = kCheckpointVersion;
    j["config_digest"] = config_digest;
    j["payload"] = payload;
    j["payload_digest"] = sha256_hex(payload.dump());
    write_atomically(path, j.dump() + "\n");
  }

  std::optional<json> load() const {
    if (!fs::exists(path)) return std::nullopt;
    try {
      json j = json::parse(read_file(path.string()));
      if (j.at("format") != "shiftpart-checkpoint" || j.at("version") != kCheckpointVersion)
        throw error("unknown checkpoint format");
      if (j.at("config_digest") != config_digest) throw error("checkpoint belongs to another config");
      if (j.at("payload_digest") != sha256_hex(j.at("payload").dump())) throw error("payload digest mismatch");
      return j.at("payload");
    } catch (const std::exception& e) {
      std::cerr << "ignoring checkpoint " << path.string() << ": " << e.what() << "\n";
      return std::nullopt;
    }
  }

  void remove() const {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

std::vector<i64> parse_list(const std::string& flag, const std::string& s) {
  try {
    return PartitionSpec::parse_list(s);
  } catch (const std::exception& e) {
    throw usage_error("--" + flag + ": " + e.what());
  }
}

PartitionSpec spec_from(i64 delta, const std::string& parts) { return PartitionSpec(delta, parse_list("parts", parts)); }

// "a/c"; "inf" or "1/0" for infinity
std::pair<i64, i64> parse_cusp(const std::string& s) {
  if (s == "inf" || s == "infinity") return {1, 0};
  auto slash = s.find('/');
  if (slash == std::string::npos) throw usage_error("--cusp must look like a/c, got '" + s + "'");
  try {
    return {PartitionSpec::parse_int(s.substr(0, slash)), PartitionSpec::parse_int(s.substr(slash + 1))};
  } catch (const std::exception& e) {
    throw usage_error("--cusp: " + std::string(e.what()));
  }
}

json context_json(const CuspContext& x) {
  return {{"a", x.a}, {"b", x.b}, {"c", x.c}, {"d", x.d}, {"D", x.D}, {"b0", x.b0}, {"d0", x.d0}, {"epsilon", x.epsilon}};
}

std::string cusp_str(i64 a, i64 c) { return std::to_string(a) + "/" + std::to_string(c); }

json certificate_json(const Certificate& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  json w = json::array();
  for (const auto& x : c.cusp_witnesses)
    w.push_back({{"cusp", cusp_str(x.a, x.c)}, {"m", x.m.str()}, {"x1", x.x1.str()}, {"x2", x.x2.str()}});
  for (const auto& x : c.coefficient_witnesses)
    w.push_back({{"index", x.index}, {"v1", x.v1.get_str()}, {"v2", x.v2.get_str()}});
  j["witnesses"] = w;
  j["parameters"] = c.parameters;
  return j;
}

int verdict_status(const Certificate& c) { return c.positive() ? 0 : 1; }

struct Output {
  std::string path;

  void emit(const json& j) const {
    std::string text = j.dump() + "\n";
    if (path.empty()) {
      std::cout << text;
      std::cout.flush();
    } else {
      std::ofstream out(path, std::ios::trunc);
      if (!out) throw usage_error("cannot write --output '" + path + "'");
      out << text;
    }
  }
};

// Persist the record with runtime under results/<command>-<digest>.json.
void persist(const std::string& command, const std::string& canonical, json record, double seconds) {
  std::string digest = sha256_hex(canonical);
  record["config"] = canonical;
  record["config_digest"] = digest;
  record["runtime_seconds"] = seconds;
  fs::path file = results_dir() / (command + "-" + digest.substr(0, 16) + ".json");
  write_atomically(file, record.dump(2) + "\n");
  std::cerr << command << ": " << seconds << " s, certificate " << file.string() << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::map<std::string, std::string> load_config(const std::string& path) {
  try {
    return parse_key_values(read_file(path));
  } catch (const domain_error& e) {
    throw usage_error(path + ": " + e.what());
  }
}

json hex_state(const KnapsackState& s) {
  json dp = json::array();
  for (const auto& v : s.dp) dp.push_back(v.get_str(16));
  return {{"next_part", s.next_part}, {"dp", dp}};
}

KnapsackState state_from_hex(const json& j) {
  KnapsackState s;
  s.next_part = j.at("next_part").get<i64>();
  for (const auto& v : j.at("dp")) s.dp.emplace_back(v.get<std::string>(), 16);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shifted partition identities: expansions, counts, suitedness and Sturm proofs"};
  app.require_subcommand(1);
  app.fallthrough();  // --threads and --output may follow the subcommand
  Output out;
  app.add_option("-o,--output", out.path, "write the record here instead of stdout");
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker cap")->check(CLI::Range(1u, 256u));

  i64 delta = 0, n = -1, to = -1, t = 0, scale = 1, terms = 0, level = 0, a = 0, c = 0, bound = 0, precision = 0;
  std::string parts, cusp, config, s1, s2, residues, modulus;
  bool count_only = false, no_resume = false, no_direct = false;

  auto add_spec = [&](CLI::App* s) {
    s->add_option("--delta", delta, "modulus")->required()->check(CLI::PositiveNumber);
    s->add_option("--parts", parts, "g1,g2,...")->required();
  };

  auto* expand = app.add_subcommand("expand", "q-expansion of F_S(scale tau), or of F_S(tau + t/delta) at a cusp");
  add_spec(expand);
  expand->add_option("--terms", terms, "terms (exponent bound at infinity)")->required()->check(CLI::PositiveNumber);
  expand->add_option("--scale", scale)->check(CLI::PositiveNumber);
  expand->add_option("--cusp", cusp, "a/c");
  expand->add_option("--t", t);

  auto* count = app.add_subcommand("count", "p_S(n)");
  add_spec(count);
  auto* count_n = count->add_option("--n", n)->check(CLI::NonNegativeNumber);
  count->add_option("--to", to, "all n in [0, to]")->check(CLI::NonNegativeNumber)->excludes(count_n);

  auto* order = app.add_subcommand("order", "ord_S at infinity, or ord^(t) at a cusp");
  add_spec(order);
  order->add_option("--cusp", cusp);
  order->add_option("--t", t);

  auto* lev = app.add_subcommand("level", "levels of F_S, of a problem, or index and Sturm bound for N");
  lev->add_option("--delta", delta)->check(CLI::PositiveNumber);
  lev->add_option("--parts", parts);
  lev->add_option("--config", config, "identity problem config");
  lev->add_option("--n", n, "level N")->check(CLI::PositiveNumber);
  std::string weight;
  lev->add_option("--weight", weight, "weight for the Sturm bound, e.g. 7/2");

  auto* cusps = app.add_subcommand("cusps", "cusp representatives of Gamma1(N)");
  cusps->add_option("--level", level)->required()->check(CLI::PositiveNumber);
  cusps->add_flag("--count-only", count_only);

  auto* context = app.add_subcommand("context", "cusp context data");
  context->add_option("--a", a)->required();
  context->add_option("--c", c)->required()->check(CLI::NonNegativeNumber);
  context->add_option("--delta", delta)->required()->check(CLI::PositiveNumber);

  auto* twisted = app.add_subcommand("twisted", "twisted special-partition count W");
  add_spec(twisted);
  twisted->add_option("--cusp", cusp)->required();
  twisted->add_option("--t", t);
  auto* tw_n = twisted->add_option("--n", n)->check(CLI::NonNegativeNumber);
  twisted->add_option("--to", to)->check(CLI::NonNegativeNumber)->excludes(tw_n);

  auto add_problem = [&](CLI::App* s) {
    auto* cfg = s->add_option("--config", config, "problem config file");
    s->add_option("--delta", delta)->excludes(cfg)->check(CLI::PositiveNumber);
    s->add_option("--s1", s1)->excludes(cfg);
    s->add_option("--s2", s2)->excludes(cfg);
    s->add_option("--r", residues, "residues")->excludes(cfg);
    s->add_option("--mod", modulus, "modulus of the residues (divides delta)")->excludes(cfg);
  };

  auto* suited = app.add_subcommand("suited", "decide whether S1, S2 are suited for each other on R");
  add_problem(suited);
  suited->add_flag("--no-resume", no_resume, "ignore an existing checkpoint");

  auto* sturm = app.add_subcommand("sturm", "prove or refute an identity by Sturm-bound comparison");
  sturm->add_option("--config", config)->required();
  sturm->add_option("--bound", bound, "override the Sturm bound")->check(CLI::PositiveNumber);
  sturm->add_flag("--no-resume", no_resume);
  sturm->add_flag("--no-direct", no_direct, "skip the multiply-then-sieve cross-check");

  auto* counter = app.add_subcommand("counterexample", "least n on R with p_S1(n - H) != p_S2(n)");
  add_problem(counter);
  i64 search_bound = 10000;
  counter->add_option("--bound", search_bound)->check(CLI::PositiveNumber);

  auto* alt = app.add_subcommand("altcheck", "the G11 + q G5 product identity");
  alt->add_option("--precision", precision)->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    return 2;
  }

  auto problem_kv = [&]() {
    if (!config.empty()) return load_config(config);
    if (delta == 0 || s1.empty() || s2.empty() || residues.empty())
      throw usage_error("need --config or all of --delta, --s1, --s2, --r");
    std::map<std::string, std::string> kv{{"delta", std::to_string(delta)}, {"s1", s1}, {"s2", s2}, {"r", residues}};
    if (!modulus.empty()) kv["mod"] = modulus;
    return kv;
  };
  auto problem_json = [](const IdentityProblem& p) {
    std::vector<i64> r(p.residues.begin(), p.residues.end());
    return json{{"s1", p.spec1.str()}, {"s2", p.spec2.str()}, {"residues", r}, {"H", p.h}};
  };

  try {
    if (*expand) {
      auto s = spec_from(delta, parts);
      json j{{"command", "expand"}, {"spec", s.str()}};
      if (cusp.empty()) {
        j["scale"] = scale;
        j["series"] = f_s_expansion(s, scale, Rational(terms), threads).to_text();
      } else {
        auto [ca, cc] = parse_cusp(cusp);
        if (scale != 1) throw usage_error("--scale is only supported at infinity");
        auto x = cusp_context(ca, cc, s.delta());
        j["cusp"] = cusp_str(x.a, x.c);
        j["t"] = t;
        j["context"] = context_json(x);
        j["ord"] = ord_t_at_cusp(s, x, t).str();
        j["series"] = expansion_at_cusp(s, x, t, terms).to_text();
      }
      out.emit(j);
      return 0;
    }
    if (*count) {
      auto s = spec_from(delta, parts);
      if (n < 0 && to < 0) throw usage_error("count needs --n or --to");
      json j{{"command", "count"}, {"spec", s.str()}};
      if (n >= 0) {
        j["n"] = n;
        j["count"] = count_ps(s, n).get_str();
      } else {
        auto tab = count_table(s, to);
        json rec = json::array();
        for (i64 k = 0; k <= to; ++k) rec.push_back({{"n", k}, {"count", tab[static_cast<std::size_t>(k)].get_str()}});
        j["records"] = rec;
      }
      out.emit(j);
      return 0;
    }
    if (*order) {
      auto s = spec_from(delta, parts);
      json j{{"command", "order"}, {"spec", s.str()}, {"ord_S", ord_s(s).str()}};
      if (!cusp.empty()) {
        auto [ca, cc] = parse_cusp(cusp);
        auto x = cusp_context(ca, cc, s.delta());
        j["cusp"] = cusp_str(x.a, x.c);
        j["t"] = t;
        j["ord"] = ord_t_at_cusp(s, x, t).str();
      }
      out.emit(j);
      return 0;
    }
    if (*lev) {
      json j{{"command", "level"}};
      int given = (!parts.empty()) + (!config.empty()) + (n > 0);
      if (given != 1) throw usage_error("level needs exactly one of --delta/--parts, --config, --n");
      if (!parts.empty()) {
        if (delta == 0) throw usage_error("--parts needs --delta");
        auto s = spec_from(delta, parts);
        i64 v = to_i64(ord_s(s).den());
        j["spec"] = s.str();
        j["f_level"] = f_level(s);
        j["robins_level"] = robins_level(EtaQuotient::from_partition_spec(s, v));
        j["sieved_level"] = ord_s(s).is_integer() ? json(sieved_level(s)) : json(nullptr);
      } else if (!config.empty()) {
        auto p = problem_from_config(load_config(config));
        j["problem"] = problem_json(p);
        j["v"] = p.v;
        j["delta_prime"] = p.deltap;
        i64 g = gamma_level(p);
        j["gamma_level"] = g;
        j["index"] = index_gamma1(g).get_str();
        j["cusps"] = cusp_count_formula(g);
      } else {
        j["n"] = n;
        j["index"] = index_gamma1(n).get_str();
        j["cusps"] = cusp_count_formula(n);
        if (!weight.empty()) {
          Rational w;
          try {
            w = Rational::parse(weight);
          } catch (const std::exception& e) {
            throw usage_error("--weight: " + std::string(e.what()));
          }
          j["weight"] = w.str();
          j["sturm_bound"] = sturm_bound(n, w).get_str();
        }
      }
      out.emit(j);
      return 0;
    }
    if (*cusps) {
      json j{{"command", "cusps"}, {"level", level}};
      if (count_only) {
        j["cusps"] = cusp_count_formula(level);
      } else {
        auto reps = cusp_representatives(level);
        j["cusps"] = reps.size();
        json r = json::array();
        for (const auto& cu : reps) r.push_back(cusp_str(cu.a, cu.c));
        j["representatives"] = r;
      }
      out.emit(j);
      return 0;
    }
    if (*context) {
      json j = context_json(cusp_context(a, c, delta));
      j["command"] = "context";
      j["delta"] = delta;
      out.emit(j);
      return 0;
    }
    if (*twisted) {
      auto s = spec_from(delta, parts);
      if (n < 0 && to < 0) throw usage_error("twisted needs --n or --to");
      auto [ca, cc] = parse_cusp(cusp);
      auto x = cusp_context(ca, cc, s.delta());
      json j{{"command", "twisted"}, {"spec", s.str()}, {"cusp", cusp_str(x.a, x.c)}, {"t", t}};
      if (n >= 0) {
        j["n"] = n;
        j["value"] = w_twisted(s, x, t, n).str();
      } else {
        json rec = json::array();
        auto classes = part_classes(s, x, t);
        for (i64 k = 0; k <= to; ++k)
          rec.push_back({{"n", k}, {"value", w_twisted(classes, 4 * s.delta() * s.delta(), k).str()}});
        j["records"] = rec;
      }
      out.emit(j);
      return 0;
    }
    if (*suited) {
      auto kv = problem_kv();
      auto p = problem_from_config(kv);
      std::string canonical = canonical_config("suited", kv);
      std::string digest = sha256_hex(canonical);
      CheckpointFile ck{results_dir() / ("suited-" + digest.substr(0, 16) + ".ckpt.json"), digest};
      SuitedOptions opt;
      opt.threads = threads;
      i64 prior = 0;
      if (!no_resume)
        if (auto pl = ck.load()) {
          opt.start = pl->at("next_cusp").get<std::size_t>();
          prior = pl->at("exponents").get<i64>();
          std::cerr << "resuming at cusp " << opt.start << "\n";
        }
      opt.checkpoint = [&](std::size_t next, i64 ex) { ck.save({{"next_cusp", next}, {"exponents", prior + ex}}); };
      auto t0 = std::chrono::steady_clock::now();
      auto cert = check_suited(p, opt);
      cert.parameters["exponents_compared"] = std::to_string(prior + std::stoll(cert.parameters["exponents_compared"]));
      json j = certificate_json(cert);
      j["command"] = "suited";
      j["problem"] = problem_json(p);
      persist("suited", canonical, j, seconds_since(t0));
      ck.remove();
      out.emit(j);
      return verdict_status(cert);
    }
    if (*sturm) {
      auto kv = load_config(config);
      if (bound > 0) kv["bound"] = std::to_string(bound);
      SturmConfig cfg;
      try {
        cfg = sturm_config_from(kv);
      } catch (const domain_error& e) {
        throw usage_error(config + ": " + e.what());
      }
      std::string canonical = canonical_config("sturm", kv);
      std::string digest = sha256_hex(canonical);
      CheckpointFile ck{results_dir() / ("sturm-" + digest.substr(0, 16) + ".ckpt.json"), digest};
      SturmOptions opt;
      opt.threads = threads;
      opt.direct_route = !no_direct;
      if (!no_resume)
        if (auto pl = ck.load()) {
          SturmProgress pr;
          for (int i = 0; i < 2; ++i) pr.state[i] = state_from_hex(pl->at("series").at(i));
          opt.resume = pr;
          std::cerr << "resuming at parts " << pr.state[0].next_part << ", " << pr.state[1].next_part << "\n";
        }
      opt.checkpoint = [&](const SturmProgress& pr) {
        ck.save({{"series", json::array({hex_state(pr.state[0]), hex_state(pr.state[1])})}});
      };
      auto t0 = std::chrono::steady_clock::now();
      auto cert = verify_identity_sturm(cfg, opt);
      json j = certificate_json(cert);
      j["command"] = "sturm";
      j["bound"] = std::stoll(cert.parameters.at("bound"));
      persist("sturm", canonical, j, seconds_since(t0));
      ck.remove();
      out.emit(j);
      return verdict_status(cert);
    }
    if (*counter) {
      auto kv = problem_kv();
      auto p = problem_from_config(kv);
      kv["bound"] = std::to_string(search_bound);
      auto t0 = std::chrono::steady_clock::now();
      auto w = find_counterexample(p.spec1, p.spec2, p.residues, p.delta(), search_bound);
      json j{{"command", "counterexample"}, {"problem", problem_json(p)}, {"bound", search_bound}, {"found", w.has_value()}};
      if (w) j["witness"] = {{"n", w->index}, {"p1", w->v1.get_str()}, {"p2", w->v2.get_str()}};
      persist("counterexample", canonical_config("counterexample", kv), j, seconds_since(t0));
      out.emit(j);
      return 0;
    }
    if (*alt) {
      auto t0 = std::chrono::steady_clock::now();
      auto cert = alt_identity_check(precision);
      json j = certificate_json(cert);
      j["command"] = "altcheck";
      persist("altcheck", canonical_config("altcheck", {{"precision", std::to_string(precision)}}), j,
              seconds_since(t0));
      out.emit(j);
      return verdict_status(cert);
    }
  } catch (const usage_error& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "usage"}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"kind", "computation"}}.dump() << "\n";
    return 2;
  }
  return 2;
}
