#include <gtest/gtest.h>
#include <openssl/evp.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shiftpart/etaq/cusp_expansion.hpp"
#include "shiftpart/etaq/eta_quotient.hpp"
#include "shiftpart/identities/sturm.hpp"
#include "shiftpart/identities/suited.hpp"
#include "shiftpart/partitions/special.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;
using namespace shiftpart;

namespace {

struct Run {
  int status;
  std::string out, err;
};

const std::string kConfigs = SHIFTPART_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("shiftpart_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args, const fs::path& results) {
  fs::path err = results / "stderr.txt";
  std::string cmd = "SHIFTPART_RESULTS_DIR='" + results.string() + "' '" + SHIFTPART_CLI_PATH + "' " + args + " 2>'" +
                    err.string() + "'";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  for (std::size_t k; (k = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, k);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out, slurp(err)};
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream ss;
  for (unsigned i = 0; i < len; ++i) ss << std::hex << (md[i] >> 4) << (md[i] & 15);
  return ss.str();
}

std::string canonical(const std::string& command, const std::map<std::string, std::string>& kv) {
  std::string s = "command=" + command + "\n";
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

void write_checkpoint(const fs::path& file, const std::string& digest, const json& payload) {
  json j{{"format", "shiftpart-checkpoint"},
         {"version", 1},
         {"config_digest", digest},
         {"payload", payload},
         {"payload_digest", sha256_hex(payload.dump())}};
  std::ofstream(file) << j.dump() << "\n";
}

struct Stop {};

}  // namespace

TEST(Cli, CountRecord) {
  auto d = scratch_dir("count");
  auto r = run("count --delta 24 --parts 1,5,7,9 --n 32", d);
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["n"], 32);
  EXPECT_EQ(j["count"], "7");
  r = run("count --delta 24 --parts 1,7,9,11 --n 33", d);
  EXPECT_EQ(json::parse(r.out)["count"], "7");
}

TEST(Cli, CountRangeMatchesLibrary) {
  auto d = scratch_dir("range");
  auto r = run("count --delta 10 --parts 1,3 --to 60", d);
  ASSERT_EQ(r.status, 0);
  auto tab = count_table(PartitionSpec(10, {1, 3}), 60);
  auto rec = json::parse(r.out)["records"];
  ASSERT_EQ(rec.size(), 61u);
  for (i64 n = 0; n <= 60; ++n) {
    EXPECT_EQ(rec[n]["n"], n);
    EXPECT_EQ(Integer(rec[n]["count"].get<std::string>()), tab[n]);
  }
}

TEST(Cli, ConstantsThroughLevelAndCusps) {
  auto d = scratch_dir("const");
  auto j = json::parse(run("cusps --level 576 --count-only", d).out);
  EXPECT_EQ(j["cusps"], 1152);
  j = json::parse(run("level --n 576 --weight 7/2", d).out);
  EXPECT_EQ(j["index"], "221184");
  EXPECT_EQ(j["sturm_bound"], "64512");
  j = json::parse(run("level --n 900 --weight 8", d).out);
  EXPECT_EQ(j["sturm_bound"], "345600");
  EXPECT_EQ(j["cusps"], 2240);
  j = json::parse(run("cusps --level 40", d).out);
  auto reps = cusp_representatives(40);
  ASSERT_EQ(j["representatives"].size(), reps.size());
  EXPECT_EQ(j["representatives"][3], std::to_string(reps[3].a) + "/" + std::to_string(reps[3].c));
  j = json::parse(run("level --config " + kConfigs + "/mod24.cfg", d).out);
  EXPECT_EQ(j["gamma_level"], 9216);
  EXPECT_EQ(j["problem"]["H"], 1);
}

TEST(Cli, UsageErrors) {
  auto d = scratch_dir("usage");
  auto r = run("count --delta 24 --parts 1,5 --n 3 --bogus 1", d);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("--bogus"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run("count --delta 24 --parts 1,5", d).status, 2);
  EXPECT_EQ(run("count --parts 1,5 --n 3", d).status, 2);
  EXPECT_EQ(run("frobnicate", d).status, 2);
  EXPECT_EQ(run("", d).status, 2);
  EXPECT_EQ(run("count --delta 24 --parts 1,x --n 3", d).status, 2);
  EXPECT_EQ(run("sturm --config /nonexistent.cfg", d).status, 2);
  EXPECT_EQ(run("suited --config " + kConfigs + "/d12.cfg --delta 12", d).status, 2);
  // module error text comes through
  r = run("count --delta 24 --parts 1,13 --n 3", d);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("part 13"), std::string::npos);
  EXPECT_EQ(run("count --help", d).status, 0);
}

TEST(Cli, ExpandRoundTrip) {
  auto d = scratch_dir("expand");
  PartitionSpec s(7, {1, 3});
  auto r = run("expand --delta 7 --parts 1,3 --terms 40 --scale 2", d);
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(QSeries<Integer>::from_text(j["series"]), f_s_expansion(s, 2, Rational(40)));

  r = run("expand --delta 7 --parts 1,3 --terms 12 --cusp 2/5 --t 3", d);
  ASSERT_EQ(r.status, 0) << r.err;
  j = json::parse(r.out);
  auto x = cusp_context(2, 5, 7);
  EXPECT_EQ(QSeries<CyclotomicNumber>::from_text(j["series"]), expansion_at_cusp(s, x, 3, 12));
  EXPECT_EQ(Rational::parse(j["ord"].get<std::string>()), ord_t_at_cusp(s, x, 3));
  auto c = j["context"];
  EXPECT_EQ(cusp_context_with(c["a"], c["b"], c["c"], c["d"], 7, c["b0"], c["d0"]), x);
}

TEST(Cli, TwistedAndContextRoundTrip) {
  auto d = scratch_dir("twisted");
  PartitionSpec s(9, {1, 2, 4});
  auto x = cusp_context(1, 6, 9);
  auto r = run("twisted --delta 9 --parts 1,2,4 --cusp 1/6 --t 2 --to 15", d);
  ASSERT_EQ(r.status, 0) << r.err;
  auto rec = json::parse(r.out)["records"];
  ASSERT_EQ(rec.size(), 16u);
  for (i64 n = 0; n <= 15; ++n) EXPECT_EQ(parse_cyclotomic(rec[n]["value"]), w_twisted(s, x, 2, n)) << n;

  auto j = json::parse(run("context --a 5 --c 12 --delta 24", d).out);
  auto y = cusp_context(5, 12, 24);
  EXPECT_EQ(j["b0"], y.b0);
  EXPECT_EQ(j["epsilon"], y.epsilon);
  EXPECT_EQ(cusp_context_with(j["a"], j["b"], j["c"], j["d"], 24, j["b0"], j["d0"]), y);

  j = json::parse(run("order --delta 24 --parts 1,7,9,11", d).out);
  EXPECT_EQ(j["ord_S"], "-3/4");
}

TEST(Cli, Deterministic) {
  auto d = scratch_dir("det");
  for (const std::string& args : std::vector<std::string>{"count --delta 30 --parts 1,9,11,13 --to 200",
                                 "suited --config " + kConfigs + "/d12_bad.cfg",
                                 "twisted --delta 8 --parts 1,3 --cusp 3/4 --t 1 --to 10"}) {
    auto a = run(args, d), b = run(args, d);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_EQ(a.out.find("runtime"), std::string::npos);
  }
}

TEST(Cli, SuitedVerdictsAndCertificates) {
  auto d = scratch_dir("suited");
  auto r = run("suited --config " + kConfigs + "/d12_bad.cfg", d);
  ASSERT_EQ(r.status, 1) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "not-suited");
  ASSERT_EQ(j["witnesses"].size(), 1u);
  auto w = j["witnesses"][0];
  EXPECT_EQ(w["cusp"], "0/1");
  EXPECT_NE(parse_cyclotomic(w["x1"]), parse_cyclotomic(w["x2"]));

  std::string digest = sha256_hex(canonical("suited", {{"delta", "12"}, {"s1", "1,2,3,4"}, {"s2", "2,3,4,5"}, {"r", "0"}}));
  fs::path cert = d / ("suited-" + digest.substr(0, 16) + ".json");
  ASSERT_TRUE(fs::exists(cert));
  auto c = json::parse(slurp(cert));
  EXPECT_EQ(c["config_digest"], digest);
  EXPECT_TRUE(c["runtime_seconds"].is_number());
  EXPECT_EQ(c["witnesses"], j["witnesses"]);

  // same problem given inline flags lands on the same certificate
  r = run("suited --delta 12 --s1 1,2,3,4 --s2 2,3,4,5 --r 0", d);
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(json::parse(r.out), j);
}

TEST(Cli, SuitedResumesFromCheckpoint) {
  auto d = scratch_dir("resume");
  std::map<std::string, std::string> kv{{"delta", "12"}, {"s1", "1,2,3,4"}, {"s2", "2,3,4,5"}, {"r", "2"}, {"mod", "3"}};
  auto fresh = run("suited --config " + kConfigs + "/d12.cfg --threads 2", d);
  ASSERT_EQ(fresh.status, 0) << fresh.err;
  auto fj = json::parse(fresh.out);
  EXPECT_EQ(fj["parameters"]["resumed_from"], "0");

  // stop the library run after a few blocks and persist its state as the CLI would
  auto p = problem_from_config(kv);
  SuitedOptions opt;
  std::size_t next = 0;
  i64 exps = 0;
  opt.checkpoint = [&](std::size_t k, i64 e) {
    if (k < 96) return;
    next = k, exps = e;
    throw Stop{};
  };
  EXPECT_THROW(check_suited(p, opt), Stop);
  ASSERT_EQ(next, 96u);
  std::string digest = sha256_hex(canonical("suited", kv));
  fs::path ck = d / ("suited-" + digest.substr(0, 16) + ".ckpt.json");
  write_checkpoint(ck, digest, {{"next_cusp", next}, {"exponents", exps}});

  auto r = run("suited --config " + kConfigs + "/d12.cfg", d);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("resuming at cusp 96"), std::string::npos);
  auto rj = json::parse(r.out);
  EXPECT_EQ(rj["parameters"]["resumed_from"], "96");
  EXPECT_EQ(rj["parameters"]["exponents_compared"], fj["parameters"]["exponents_compared"]);
  EXPECT_EQ(rj["verdict"], "suited");
  EXPECT_FALSE(fs::exists(ck));

  // a tampered payload is rejected and the run starts over
  json bad{{"next_cusp", 5000}, {"exponents", 0}};
  write_checkpoint(ck, digest, bad);
  auto text = slurp(ck);
  text.replace(text.find("\"next_cusp\":5000"), 16, "\"next_cusp\":5600");
  std::ofstream(ck) << text;
  r = run("suited --config " + kConfigs + "/d12.cfg", d);
  EXPECT_NE(r.err.find("payload digest mismatch"), std::string::npos);
  EXPECT_EQ(r.out, fresh.out);

  // --no-resume ignores a valid one
  write_checkpoint(ck, digest, {{"next_cusp", 5600}, {"exponents", 0}});
  r = run("suited --config " + kConfigs + "/d12.cfg --no-resume", d);
  EXPECT_EQ(r.out, fresh.out);
}

TEST(Cli, SturmProvedRefutedAndResumed) {
  auto d = scratch_dir("sturm");
  auto r = run("sturm --config " + kConfigs + "/mod24.cfg", d);
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "proved");
  EXPECT_EQ(j["bound"], 64512);
  EXPECT_EQ(j["parameters"]["direct_route"], "agreed");

  r = run("sturm --config " + kConfigs + "/mod24_corrupted.cfg --no-direct", d);
  ASSERT_EQ(r.status, 1) << r.err;
  j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "refuted");
  EXPECT_EQ(j["witnesses"][0]["index"], 4);

  // checkpoint taken mid-way through the second series
  std::string text = slurp(kConfigs + "/mod24.cfg");
  auto kv = parse_key_values(text);
  kv["bound"] = "20000";
  auto cfg = sturm_config_from(kv);
  SturmOptions opt;
  opt.direct_route = false;
  SturmProgress got;
  opt.checkpoint = [&](const SturmProgress& pr) {
    if (pr.state[1].dp.empty()) return;
    got = pr;
    throw Stop{};
  };
  EXPECT_THROW(verify_identity_sturm(cfg, opt), Stop);
  ASSERT_GT(got.state[1].next_part, 1);
  auto hex = [](const KnapsackState& s) {
    json dp = json::array();
    for (const auto& v : s.dp) dp.push_back(v.get_str(16));
    return json{{"next_part", s.next_part}, {"dp", dp}};
  };
  std::string digest = sha256_hex(canonical("sturm", kv));
  fs::path ck = d / ("sturm-" + digest.substr(0, 16) + ".ckpt.json");
  auto fresh = run("sturm --config " + kConfigs + "/mod24.cfg --bound 20000 --no-resume", d);
  ASSERT_EQ(fresh.status, 0) << fresh.err;
  EXPECT_FALSE(fs::exists(ck));  // finished runs clear their checkpoint
  write_checkpoint(ck, digest, {{"series", json::array({hex(got.state[0]), hex(got.state[1])})}});
  r = run("sturm --config " + kConfigs + "/mod24.cfg --bound 20000", d);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.err.find("resuming"), std::string::npos);
  EXPECT_EQ(r.out, fresh.out);
  EXPECT_FALSE(fs::exists(ck));
}

TEST(Cli, CounterexampleAndAltcheck) {
  auto d = scratch_dir("misc");
  auto r = run("counterexample --delta 30 --s1 1,7,9,11 --s2 1,9,11,13 --r 0,2 --mod 6", d);
  ASSERT_EQ(r.status, 0) << r.err;
  auto j = json::parse(r.out);
  ASSERT_TRUE(j["found"].get<bool>());
  i64 n = j["witness"]["n"];
  EXPECT_TRUE(n % 6 == 0 || n % 6 == 2);
  EXPECT_EQ(Integer(j["witness"]["p1"].get<std::string>()), count_ps(PartitionSpec(30, {1, 7, 9, 11}), n - 1));
  EXPECT_EQ(Integer(j["witness"]["p2"].get<std::string>()), count_ps(PartitionSpec(30, {1, 9, 11, 13}), n));

  r = run("counterexample --delta 24 --s1 1,5,7,9 --s2 1,7,9,11 --r 4 --mod 6 --bound 3000", d);
  EXPECT_FALSE(json::parse(r.out)["found"].get<bool>());

  r = run("altcheck --precision 600", d);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["verdict"], "proved");
}

TEST(Cli, OutputFlag) {
  auto d = scratch_dir("output");
  fs::path o = d / "rec.json";
  auto r = run("--output '" + o.string() + "' count --delta 24 --parts 1,5,7,9 --n 32", d);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(slurp(o))["count"], "7");
}
