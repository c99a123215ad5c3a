#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtsl/labcli.hpp"
#include "qtsl/oracles.hpp"

using namespace qtsl;
using nlohmann::json;

namespace {

json base_config() {
  return {{"schema", kConfigSchema},
          {"game", {{"name", "yaobox"}, {"N", 4}}},
          {"adversary", {{"name", "yaobox_store_first"}}},
          {"seed", 1}};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qtsl_test_" + name)).string();
}

std::string write_config(const std::string& name, const json& j) {
  const std::string path = temp_path(name);
  std::ofstream(path) << j.dump(2);
  return path;
}

std::string without_wall(const std::string& row) { return row.substr(0, row.rfind(',')); }

}  // namespace

TEST(Config, RequiresVersionedSchema) {
  json j = base_config();
  EXPECT_NO_THROW(parse_config(j));
  j.erase("schema");
  EXPECT_THROW(parse_config(j), ConfigError);
  j["schema"] = "qtsl.experiment/0";
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, RejectsEmptyOrMalformedSweeps) {
  json j = base_config();
  j["sweep"] = {{"T", json::array()}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j["sweep"] = {{"T", {{"from", 5}, {"to", 2}}}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j["sweep"] = {{"Q", {1, 2}}};
  EXPECT_THROW(parse_config(j), ConfigError);
  j["sweep"] = json::object();
  EXPECT_THROW(parse_config(j), ConfigError);
  j["sweep"] = {{"S", {{"from", 4}, {"to", 32}, {"step", 2}, {"geometric", true}}}};
  EXPECT_EQ(parse_config(j).sweep_S, (std::vector<std::size_t>{4, 8, 16, 32}));
}

TEST(Config, RejectsBadScalars) {
  json j = base_config();
  j["T"] = -1;
  EXPECT_THROW(parse_config(j), ConfigError);
  j = base_config();
  j["mode"] = "quantum";
  EXPECT_THROW(parse_config(j), ConfigError);
  j = base_config();
  j["trials"] = 0;
  EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Rows, HeaderAndFormatting) {
  EXPECT_STREQ(kCsvHeader, "game,N,M,K,S,T,g,mode,trials,win_rate,ci_low,ci_high,exact,seed,wall_ms");
  ResultRow r;
  r.game = "owf";
  r.N = r.M = 4;
  r.mode = "exact";
  r.trials = 10;
  r.win_rate = r.ci_low = r.ci_high = 0.5;
  r.exact = true;
  r.seed = 3;
  r.wall_ms = 1.25;
  EXPECT_EQ(r.to_csv(), "owf,4,4,1,0,0,1,exact,10,0.500000000000,0.500000000000,0.500000000000,true,3,1.250");
}

TEST(RunPoint, StoreFirstExact) {
  ExperimentConfig c = parse_config(base_config());
  c.exact = true;
  const ResultRow r = run_point(c, 0, 0, 1, 1);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.win_rate, 0.625);
  EXPECT_EQ(r.ci_low, r.win_rate);
  EXPECT_EQ(r.ci_high, r.win_rate);
}

TEST(RunPoint, SaltedSumAttackExact) {
  json j = base_config();
  j["game"] = {{"name", "salted:predict"}, {"M", 4}, {"K", 8}};
  j["adversary"] = {{"name", "salted_prediction"}};
  j["exact"] = true;
  j["max_worlds"] = 1e7;
  const ExperimentConfig c = parse_config(j);
  EXPECT_DOUBLE_EQ(run_point(c, 2, 1, 8, 1).win_rate, 0.4375);
}

TEST(RunPoint, ExactRowInsideMonteCarloInterval) {
  ExperimentConfig c = parse_config(base_config());
  c.exact = true;
  const double exact = run_point(c, 0, 0, 1, 1).win_rate;
  c.exact = false;
  c.trials = 3000;
  const ResultRow mc = run_point(c, 0, 0, 1, 1);
  EXPECT_FALSE(mc.exact);
  EXPECT_LE(mc.ci_low, exact);
  EXPECT_GE(mc.ci_high, exact);
}

TEST(RunPoint, ExactBeyondGuardIsRefused) {
  json j = base_config();
  j["game"] = {{"name", "owf_y"}, {"N", 6}, {"M", 6}};
  j["adversary"] = {{"name", "grover"}};
  j["exact"] = true;
  j["max_worlds"] = 100;
  EXPECT_THROW(run_point(parse_config(j), 0, 1, 1, 1), GuardExceeded);
}

TEST(Sweep, GuardViolationsAreRecordedNotFatal) {
  json j = base_config();
  j["game"] = {{"name", "owf_y"}, {"N", 3}, {"M", 3}};
  j["adversary"] = {{"name", "grover"}};
  j["exact"] = true;
  j["max_worlds"] = 100;
  j["sweep"] = {{"g", {1, 3}}};
  const auto rows = run_sweep(parse_config(j));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_TRUE(rows[0].error.empty());
  EXPECT_FALSE(rows[1].error.empty());
}

TEST(Sweep, CurveUsesLogAxesAndMarksFrontier) {
  std::vector<ResultRow> rows(3);
  for (std::size_t i = 0; i < 3; ++i) {
    rows[i].game = "owf";
    rows[i].N = 16;
    rows[i].S = 4;
    rows[i].T = std::size_t{1} << (2 * i);
    rows[i].win_rate = 0.3 * static_cast<double>(i);
  }
  const auto lines = curve_rows(rows, 0.5);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "owf,16,1,1,4,1,0.500000,0.000000,0.000000000000,0");
  EXPECT_EQ(lines[1], "owf,16,1,1,4,4,0.500000,0.500000,0.300000000000,0");
  EXPECT_EQ(lines[2], "owf,16,1,1,4,16,0.500000,1.000000,0.600000000000,1");
}

TEST(Commands, RunIsReproducibleModuloTiming) {
  json j = base_config();
  j["game"] = {{"name", "owf_y"}, {"N", 8}, {"M", 8}};
  j["adversary"] = {{"name", "iterated_grover"}};
  j["g"] = 2;
  j["T"] = 1;
  j["trials"] = 300;
  const std::string path = write_config("repro.json", j);
  std::ostringstream a, b, err;
  CliOverrides o;
  o.seed = 99;
  ASSERT_EQ(cmd_run(path, o, a, err), 0) << err.str();
  ASSERT_EQ(cmd_run(path, o, b, err), 0) << err.str();
  const std::string ra = a.str().substr(a.str().find('\n') + 1);
  const std::string rb = b.str().substr(b.str().find('\n') + 1);
  EXPECT_EQ(without_wall(ra), without_wall(rb));
  EXPECT_NE(ra.find(",99,"), std::string::npos);
}

TEST(Commands, AppendsToResultsFileWithOneHeader) {
  const std::string path = write_config("append.json", base_config());
  const std::string out = temp_path("append.csv");
  std::filesystem::remove(out);
  CliOverrides o;
  o.out = out;
  std::ostringstream sink, err;
  ASSERT_EQ(cmd_run(path, o, sink, err), 0);
  ASSERT_EQ(cmd_run(path, o, sink, err), 0);
  std::ifstream f(out);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(f, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], kCsvHeader);
}

TEST(Commands, ConfigErrorsExitTwo) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(temp_path("missing.json"), {}, out, err), 2);
  json j = base_config();
  j.erase("seed");
  EXPECT_EQ(cmd_run(write_config("noseed.json", j), {}, out, err), 2);
  CliOverrides o;
  o.seed = 5;
  EXPECT_EQ(cmd_run(write_config("noseed.json", j), o, out, err), 0);
  EXPECT_EQ(cmd_sweep(write_config("nosweep.json", base_config()), {}, out, err), 2);
  j = base_config();
  j["sweep"] = {{"S", json::array()}};
  EXPECT_EQ(cmd_sweep(write_config("emptysweep.json", j), {}, out, err), 2);
}

TEST(Commands, TranscriptsAreJsonLines) {
  json j = base_config();
  j["trials"] = 20;
  j["transcripts"] = temp_path("t.jsonl");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(write_config("transcripts.json", j), {}, out, err), 0) << err.str();
  std::ifstream f(temp_path("t.jsonl"));
  std::size_t n = 0;
  for (std::string line; std::getline(f, line); ++n) {
    const json t = json::parse(line);
    EXPECT_TRUE(t.contains("rounds"));
    EXPECT_TRUE(t.contains("win"));
  }
  EXPECT_EQ(n, 20u);
}

TEST(Commands, VerifyFilterAndMutation) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("known-values", out, err), 0);
  EXPECT_NE(out.str().find("[PASS] known-values"), std::string::npos);
  EXPECT_EQ(out.str().find("oracle-equiv"), std::string::npos);
  EXPECT_EQ(cmd_verify("nope", out, err), 2);
  fault::std_decomp_offset = 1;
  std::ostringstream mutated;
  const int code = cmd_verify("oracle-equiv", mutated, err);
  fault::std_decomp_offset = 0;
  EXPECT_EQ(code, 1);
  EXPECT_NE(mutated.str().find("[FAIL] oracle-equiv"), std::string::npos);
}

TEST(BoundCheck, SaltingRespectsExplicitConstant) {
  const auto rep = bound_check("salt-mis", {"T=1", "g=2"});
  EXPECT_TRUE(rep.passed);
  ASSERT_EQ(rep.lines.size(), 1u);
  ASSERT_TRUE(rep.lines[0].explicit_bound.has_value());
  EXPECT_DOUBLE_EQ(*rep.lines[0].explicit_bound, 4.0);
}

TEST(BoundCheck, OwfMisReportsFittedConstant) {
  const auto rep = bound_check("owf-mis", {"N=4", "T=1"});
  ASSERT_EQ(rep.lines.size(), 2u);
  EXPECT_GT(rep.fitted_constant, 0.0);
}

TEST(BoundCheck, RejectsUnknownInput) {
  EXPECT_THROW(bound_check("nope", {}), ConfigError);
  EXPECT_THROW(bound_check("prgind", {"N"}), ConfigError);
  EXPECT_THROW(bound_check("prgind", {"Z=3"}), ConfigError);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_bound_check("nope", {}, out, err), 2);
}
