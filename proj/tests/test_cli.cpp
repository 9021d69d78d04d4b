// End-to-end tests of the jacobi_cli binary plus the config and report
// helpers it is built on.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "jacobi/io.hpp"

#ifndef JACOBI_CLI_PATH
#error "JACOBI_CLI_PATH must point at the jacobi_cli binary"
#endif

namespace {

namespace fs = std::filesystem;
using jacobi::io::json;

struct RunResult {
  int exit_code;
  std::string out;
};

// Run the CLI with the given arguments inside `dir`; stderr is discarded.
RunResult run_cli(const std::string& args, const fs::path& dir = fs::temp_directory_path()) {
  const std::string cmd = "cd '" + dir.string() + "' && '" JACOBI_CLI_PATH "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("jacobi_cli_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const json& j) const {
    const auto p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  fs::path dir_;
};

json walk_config(double point, int steps, int replicas) {
  return {{"params", {{"alpha", 2.5}, {"beta", 0.5}}},
          {"nu", {{"kind", "point_mass"}, {"point", point}}},
          {"experiment", {{"operation", "walk"}, {"steps", steps}, {"replicas", replicas}}},
          {"output", {{"csv", "finals.csv"}, {"json", "summary.json"}}},
          {"seed", 99}};
}

TEST_F(CliTest, EvalAtOriginIsOne) {
  const auto r = run_cli("eval --alpha 2.5 --beta 0.5 --lambda 1.3 --t 0");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "1 0\n");
}

TEST_F(CliTest, EvalRoutesAgree) {
  const auto a = run_cli("eval --alpha 2.5 --beta 0.5 --lambda 1.3 --t 0.7 --route series");
  const auto b = run_cli("eval --alpha 2.5 --beta 0.5 --lambda 1.3 --t 0.7 --route integral");
  ASSERT_EQ(a.exit_code, 0);
  ASSERT_EQ(b.exit_code, 0);
  double ar, ai, br, bi;
  std::istringstream(a.out) >> ar >> ai;
  std::istringstream(b.out) >> br >> bi;
  EXPECT_NEAR(ar, br, 1e-8);
  EXPECT_NEAR(ai, bi, 1e-8);
}

TEST_F(CliTest, HyperbolicFlagsResolveToIndices) {
  const auto h = run_cli("eval --field-dim 2 --k 3 --lambda 0.9 --t 1.4");
  const auto d = run_cli("eval --alpha 2 --beta 0 --lambda 0.9 --t 1.4");
  EXPECT_EQ(h.exit_code, 0);
  EXPECT_EQ(h.out, d.out);
}

TEST_F(CliTest, DomainAndParseErrorsExitTwo) {
  EXPECT_EQ(run_cli("eval --alpha 0 --beta 1 --lambda 1 --t 1").exit_code, 2);
  EXPECT_EQ(run_cli("eval --alpha 1 --beta 0 --field-dim 2 --k 3 --lambda 1 --t 1").exit_code, 2);
  EXPECT_EQ(run_cli("eval --alpha 1 --beta 0 --lambda 1").exit_code, 2);
  EXPECT_EQ(run_cli("eval --alpha 1 --beta 0 --lambda 1 --t 1 --route other").exit_code, 2);
  EXPECT_EQ(run_cli("nosuchcommand").exit_code, 2);
}

TEST_F(CliTest, MomentsMatchLogCosh) {
  const auto r = run_cli("moments --alpha 2 --beta 0 --order 1 --t 3");
  ASSERT_EQ(r.exit_code, 0);
  double v, res;
  std::istringstream(r.out) >> v >> res;
  EXPECT_NEAR(v, std::log(std::cosh(3.0)), 1e-10);
}

TEST_F(CliTest, ConvolveReportsSmallDifference) {
  const auto r = run_cli("convolve --alpha 2.5 --beta 0.5 --s 0.8 --t 1.1 --lambda 0.7");
  ASSERT_EQ(r.exit_code, 0);
  const auto pos = r.out.find("difference ");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(std::stod(r.out.substr(pos + 11)), 1e-7);
}

TEST_F(CliTest, WalkIsByteIdenticalAcrossRunsAndThreads) {
  const auto cfg = write("walk.json", walk_config(1.0, 30, 500));
  ASSERT_EQ(run_cli("--threads 1 walk walk.json", dir_).exit_code, 0);
  const auto csv1 = slurp(dir_ / "finals.csv");
  const auto json1 = slurp(dir_ / "summary.json");
  ASSERT_EQ(run_cli("--threads 4 walk walk.json", dir_).exit_code, 0);
  EXPECT_EQ(slurp(dir_ / "finals.csv"), csv1);
  EXPECT_EQ(slurp(dir_ / "summary.json"), json1);
  EXPECT_EQ(csv1.substr(0, csv1.find('\n') + 1), "index,final_position\r\n");
}

TEST_F(CliTest, WalkPointMassAtZeroGivesZeros) {
  write("walk.json", walk_config(0.0, 10, 20));
  ASSERT_EQ(run_cli("walk walk.json", dir_).exit_code, 0);
  std::istringstream csv(slurp(dir_ / "finals.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    EXPECT_EQ(line.substr(line.find(',') + 1), "0");
    ++rows;
  }
  EXPECT_EQ(rows, 20);
}

TEST_F(CliTest, ReplicasFlagBeatsConfig) {
  write("walk.json", walk_config(1.0, 5, 10));
  const auto r = run_cli("walk walk.json --replicas 7 --csv - --json out.json", dir_);
  ASSERT_EQ(r.exit_code, 0);
  int lines = 0;
  std::istringstream is(r.out);
  for (std::string l; std::getline(is, l);) ++lines;
  EXPECT_EQ(lines, 8);  // header + 7 replicas
  EXPECT_EQ(json::parse(slurp(dir_ / "out.json")).at("replicas").get<int>(), 7);
}

TEST_F(CliTest, RecordedPathsEndAtTheFinalPositions) {
  auto cfg = walk_config(1.0, 4, 3);
  cfg["experiment"]["record_paths"] = true;
  write("walk.json", cfg);
  EXPECT_EQ(run_cli("walk walk.json", dir_).exit_code, 2);  // no destination for the paths
  cfg["output"]["paths_csv"] = "paths.csv";
  write("walk.json", cfg);
  ASSERT_EQ(run_cli("walk walk.json", dir_).exit_code, 0);
  std::istringstream paths(slurp(dir_ / "paths.csv"));
  std::istringstream finals(slurp(dir_ / "finals.csv"));
  std::string line, fin;
  std::getline(paths, line);
  EXPECT_EQ(line, "replica,step,position\r");
  std::getline(finals, fin);
  int rows = 0;
  while (std::getline(paths, line)) {
    ++rows;
    if (rows % 5 == 1) EXPECT_EQ(line.substr(line.rfind(',') + 1), "0\r");
    if (rows % 5 == 0) {
      std::getline(finals, fin);
      EXPECT_EQ(line.substr(line.rfind(',') + 1), fin.substr(fin.find(',') + 1));
    }
  }
  EXPECT_EQ(rows, 3 * 5);
}

TEST_F(CliTest, WalkOverflowExitsThree) {
  write("walk.json", walk_config(6e6, 3, 2));
  EXPECT_EQ(run_cli("walk walk.json", dir_).exit_code, 3);
}

TEST_F(CliTest, UnknownConfigKeyExitsTwo) {
  auto cfg = walk_config(1.0, 5, 10);
  cfg["experiment"]["stpes"] = 5;
  write("bad.json", cfg);
  EXPECT_EQ(run_cli("walk bad.json", dir_).exit_code, 2);
  auto top = walk_config(1.0, 5, 10);
  top["extra"] = 1;
  write("bad2.json", top);
  EXPECT_EQ(run_cli("walk bad2.json", dir_).exit_code, 2);
  EXPECT_EQ(run_cli("walk missing.json", dir_).exit_code, 2);
}

TEST_F(CliTest, LimitsZeroLambdaAndThresholdFlag) {
  json cfg = {{"params", {{"alpha", 3.0}, {"beta", 0.5}}},
              {"experiment",
               {{"operation", "limits"},
                {"kind", "alpha_limit"},
                {"beta", 0.5},
                {"lambda", 0.0},
                {"t_grid", {0.0, 1.0, 3.0}},
                {"alpha_grid", {10, 30, 100}}}},
              {"output", {{"csv", "res.csv"}, {"json", "rep.json"}}}};
  write("zero.json", cfg);
  ASSERT_EQ(run_cli("limits zero.json", dir_).exit_code, 0);
  const auto rep = json::parse(slurp(dir_ / "rep.json"));
  for (const auto& p : rep.at("residuals")) EXPECT_LT(p.at("residual").get<double>(), 1e-13);

  cfg["experiment"]["lambda"] = 1.0;
  cfg["experiment"]["slope_threshold"] = -0.45;
  write("rate.json", cfg);
  ASSERT_EQ(run_cli("limits rate.json", dir_).exit_code, 0);
  auto r = json::parse(slurp(dir_ / "rep.json"));
  ASSERT_TRUE(r.contains("fitted_exponent"));
  const double slope = r.at("fitted_exponent").get<double>();
  EXPECT_EQ(r.at("pass").get<bool>(), slope <= -0.45);

  cfg["experiment"]["slope_threshold"] = slope - 0.01;
  write("strict.json", cfg);
  ASSERT_EQ(run_cli("limits strict.json", dir_).exit_code, 0);
  EXPECT_FALSE(json::parse(slurp(dir_ / "rep.json")).at("pass").get<bool>());
  EXPECT_EQ(slurp(dir_ / "res.csv").substr(0, 25), "alpha,residual,normalized");
}

json clt_regime_config(double r) {
  return {{"params", {{"alpha", 2.0}, {"beta", 0.0}}},
          {"nu", {{"kind", "point_mass"}, {"point", 1.0}}},
          {"experiment",
           {{"operation", "clt"},
            {"kind", "regimes"},
            {"regime", "auto"},
            {"replicas", 500},
            {"n_grid", {50, 100}},
            {"compression_exponent", r}}},
          {"output", {{"csv", "clt.csv"}, {"json", "clt.json"}}},
          {"seed", 4}};
}

TEST_F(CliTest, CltRegimeRejectsLargeExponent) {
  write("bad.json", clt_regime_config(0.5));
  EXPECT_EQ(run_cli("clt bad.json", dir_).exit_code, 2);
  write("bad2.json", clt_regime_config(0.7));
  EXPECT_EQ(run_cli("clt bad2.json --regime auto", dir_).exit_code, 2);
}

TEST_F(CliTest, CltAutoRegimeAndSchemaRoundTrip) {
  write("ok.json", clt_regime_config(0.3));
  ASSERT_EQ(run_cli("clt ok.json --regime auto --samples-csv z.csv", dir_).exit_code, 0);
  const auto rep = json::parse(slurp(dir_ / "clt.json"));
  EXPECT_EQ(rep.at("regime").get<std::string>(), "case1");
  EXPECT_TRUE(jacobi::io::clt_report_schema_errors(rep).empty());
  const auto again = json::parse(rep.dump());
  EXPECT_EQ(again, rep);
  json broken = rep;
  broken.erase("points");
  EXPECT_FALSE(jacobi::io::clt_report_schema_errors(broken).empty());
  const auto z = slurp(dir_ / "z.csv");
  EXPECT_EQ(z.substr(0, z.find('\r')), "index,normalized_statistic");
  // An explicit case that disagrees with r is a configuration error.
  EXPECT_EQ(run_cli("clt ok.json --regime case3", dir_).exit_code, 2);
}

TEST_F(CliTest, CltDeterministicAcrossThreads) {
  write("ok.json", clt_regime_config(0.1));
  ASSERT_EQ(run_cli("--threads 1 clt ok.json", dir_).exit_code, 0);
  const auto a = slurp(dir_ / "clt.json") + slurp(dir_ / "clt.csv");
  ASSERT_EQ(run_cli("--threads 3 clt ok.json", dir_).exit_code, 0);
  EXPECT_EQ(slurp(dir_ / "clt.json") + slurp(dir_ / "clt.csv"), a);
}

TEST(IoParsing, ParamsAndStepLaws) {
  using namespace jacobi::io;
  EXPECT_EQ(parse_params(json{{"field_dim", 4}, {"k", 2}}), jacobi::JacobiParams(3.0, 1.0));
  EXPECT_THROW(parse_params(json{{"alpha", 1.0}}), jacobi::ConfigError);
  EXPECT_THROW(parse_params(json{{"alpha", 1.0}, {"beta", 0.0}, {"k", 2}}), jacobi::ConfigError);
  const auto nu = parse_nu(json{{"kind", "atoms"}, {"atoms", {{0.5, 0.25}, {2.0, 0.75}}}});
  EXPECT_DOUBLE_EQ(jacobi::raw_moment(nu, 1), 0.125 + 1.5);
  EXPECT_EQ(parse_nu(nu_to_json(nu)).kind_name(), "atoms");
  EXPECT_THROW(parse_nu(json{{"kind", "uniform"}, {"a", 0.0}}), jacobi::ConfigError);
  EXPECT_THROW(parse_nu(json{{"kind", "gamma"}}), jacobi::ConfigError);
}

TEST(IoParsing, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0})
    EXPECT_EQ(std::stod(jacobi::io::format_double(x)), x);
}

}  // namespace
