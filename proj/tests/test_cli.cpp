#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support.hpp"

using ontokit::test::data;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ontokit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ontokit::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const CliRun& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(cli({"verify", "--model", "ks", "--engine", "quad:17", "--pairs", "100"}).code, 0);
  const CliRun bb = cli({"--format", "json", "verify", "--model", "bb:3", "--engine", "closed"});
  ASSERT_EQ(bb.code, 0);
  EXPECT_EQ(json_of(bb)["result"]["max_deviation"], 0.0);
  EXPECT_EQ(cli({"verify", "--model", "nosuch"}).code, 2);
  EXPECT_EQ(cli({"verify", "--model", "ks", "--engine", "simpson"}).code, 2);
  EXPECT_EQ(cli({"verify", "--model", "ks:3"}).code, 2);
  EXPECT_EQ(cli({"verify"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Cli, ReportEnvelope) {
  const CliRun r = cli({"--format", "json", "--seed", "5", "ksval", data("vectors/triad.vec")});
  ASSERT_EQ(r.code, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["tool"], "ontokit");
  EXPECT_EQ(j["version"], ONTOKIT_VERSION);
  EXPECT_EQ(j["command"], "ksval");
  EXPECT_EQ(j["seed"], 5);
  ASSERT_EQ(j["inputs"].size(), 1u);
  EXPECT_EQ(j["inputs"][0]["sha256"], ontokit::cli::sha256_file(data("vectors/triad.vec")));
  EXPECT_EQ(j["result"]["checker"]["ok"], true);
}

TEST(Cli, ByteIdenticalReports) {
  const std::vector<std::string> args = {"--format", "json", "--seed", "3", "verify", "--model", "ws:3",
                                         "--engine", "mc:20000", "--pairs", "3"};
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  EXPECT_EQ(a.out, b.out);
  const CliRun c = cli({"--format", "json", "--seed", "4", "verify", "--model", "ws:3", "--engine", "mc:20000",
                     "--pairs", "3"});
  EXPECT_NE(a.out, c.out);
  EXPECT_EQ(cli({"--format", "json", "classify"}).out, cli({"--format", "json", "classify"}).out);
}

TEST(Cli, SeedFromEnvironment) {
  ::setenv("ONTOKIT_SEED", "9", 1);
  const CliRun env = cli({"--format", "json", "verify", "--model", "bb:2", "--pairs", "1"});
  const CliRun flag = cli({"--format", "json", "--seed", "2", "verify", "--model", "bb:2", "--pairs", "1"});
  ::unsetenv("ONTOKIT_SEED");
  EXPECT_EQ(json_of(env)["seed"], 9);
  EXPECT_EQ(json_of(flag)["seed"], 2);
}

TEST(Cli, GlobalOptionsAfterSubcommand) {
  const CliRun r = cli({"verify", "--model", "bb:2", "--pairs", "1", "--format", "json", "--seed", "6"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json_of(r)["seed"], 6);
}

TEST(Cli, ConfigFileAndOutput) {
  const auto dir = std::filesystem::temp_directory_path() / "ontokit_cli_test";
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "run.toml";
  const auto out = dir / "report.json";
  std::ofstream(cfg) << "seed = 12\nformat = \"json\"\n[verify]\nmodel = \"bb:2\"\npairs = 2\n";
  const CliRun r = cli({"--config", cfg.string(), "--output", out.string(), "verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(out);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["seed"], 12);
  EXPECT_EQ(j["result"]["rows"].size(), 4u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, Table) {
  const CliRun ok = cli({"table"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_NE(ok.out.find("unimplemented"), std::string::npos);
  const CliRun bad = cli({"table", "--declare", "ks=yes,no,no"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("determinism: measured yes, declared no"), std::string::npos);
  const CliRun csv = cli({"--format", "csv", "table"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "name,type,reciprocity,determinism,contextual");
  EXPECT_NE(csv.out.find("W-S,\"ontic-supplem.\",no,yes,yes"), std::string::npos);
  EXPECT_EQ(cli({"table", "--declare", "ks=maybe,no,no"}).code, 2);
}

TEST(Cli, KsvalBoundPrepctx) {
  EXPECT_EQ(cli({"ksval", data("vectors/peres33.vec")}).code, 1);
  EXPECT_EQ(cli({"ksval", data("vectors/triad.vec"), "--all"}).code, 0);
  EXPECT_EQ(cli({"ksval", data("vectors/parallel.vec")}).code, 2);
  EXPECT_EQ(cli({"ksval", data("vectors/missing.vec")}).code, 2);

  const CliRun zx = cli({"--format", "json", "bound", data("fragments/d2_zx.frag")});
  ASSERT_EQ(zx.code, 0);
  const auto j = json_of(zx)["result"];
  EXPECT_EQ(j["f_star"], 1.0);
  EXPECT_EQ(j["feasible"], true);
  EXPECT_EQ(j["born_reverified"], true);
  EXPECT_EQ(j["caveat"], "noncontextual-deterministic class");
  const CliRun unc = cli({"--format", "json", "bound", data("fragments/d3_uncolorable.frag")});
  EXPECT_EQ(unc.code, 1);
  EXPECT_EQ(json_of(unc)["result"]["n_atoms"], 0);
  EXPECT_EQ(json_of(unc)["result"]["certificate"]["check"]["ok"], true);
  EXPECT_EQ(cli({"bound", data("fragments/none.frag")}).code, 2);

  const CliRun prep = cli({"--format", "json", "prepctx", "--model", "ks", "--rho", "unpolarized", "--ctx", "z,x"});
  ASSERT_EQ(prep.code, 0);
  EXPECT_GT(json_of(prep)["result"]["tv"]["value"].get<double>(), 0.1);
  EXPECT_EQ(cli({"prepctx", "--model", "ks", "--ctx", "z,q"}).code, 2);
}

TEST(Cli, Sha256KnownVector) {
  const auto p = std::filesystem::temp_directory_path() / "ontokit_sha_test.txt";
  std::ofstream(p, std::ios::binary) << "abc";
  EXPECT_EQ(ontokit::cli::sha256_file(p), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::filesystem::remove(p);
}
