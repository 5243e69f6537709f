// Copyright 2026 The MDM Tradeoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdm/cli.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdm/analytic.hpp"

namespace mdm::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mdm_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct ToolResult {
  int exit_code;
  std::string out;
};

ToolResult run_tool(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string(MDM_TOOL_PATH) + " " + args + " > " + out.string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

RunConfig sweep_config(int n, int d, int grid) {
  RunConfig c;
  c.copies = n;
  c.local_dim = d;
  c.grid_points = grid;
  return c;
}

TEST(Parse, NamesRoundTrip) {
  for (auto c : {Command::kSweep, Command::kVerifyQubit, Command::kVerifyQudit, Command::kMcCheck, Command::kFigure})
    EXPECT_EQ(parse_command(command_name(c)), c);
  for (auto f : {Format::kCsv, Format::kJson, Format::kSvg}) EXPECT_EQ(parse_format(format_name(f)), f);
  EXPECT_THROW(parse_command("plot"), ConfigError);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Validate, RejectsBadConfigs) {
  auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.p_min = 0.0; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.p_max = 1.0; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.p_min = 0.6, c.p_max = 0.4; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.grid_points = 1; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.samples = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.copies = 0; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.local_dim = 1; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.copies = 12, c.local_dim = 8; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.command = Command::kVerifyQudit; })), ConfigError);
  EXPECT_THROW(validate(bad([](RunConfig& c) { c.command = Command::kFigure, c.figure = 3, c.output_path = "x"; })),
               ConfigError);
  EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(Sweep, SingleQubitDefaultGrid) {
  const auto record = run_sweep(sweep_config(1, 2, 101));
  EXPECT_TRUE(record.pass);
  EXPECT_EQ(record.exit_code, kExitPass);
  const auto lines = lines_of(to_csv(record.curves.front().points));
  ASSERT_EQ(lines.size(), 102u);
  EXPECT_EQ(lines.front(), "p,F,G,lambda_max,alpha,beta,gap");
  const auto& pts = record.curves.front().points;
  EXPECT_NEAR(pts.front().G, 2.0 / 3, 5e-3);
  EXPECT_NEAR(pts.back().F, 1.0, 5e-3);
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i - 1].p, pts[i].p);
}

TEST(Sweep, FiveLevelPairEndpoints) {
  auto c = sweep_config(2, 5, 11);
  c.p_min = 1e-6;
  c.p_max = 1 - 1e-6;
  const auto record = run_sweep(c);
  EXPECT_EQ(record.exit_code, kExitPass);
  const auto& pts = record.curves.front().points;
  EXPECT_NEAR(pts.front().F, 3.0 / 7, 1e-5);
  EXPECT_NEAR(pts.front().G, 3.0 / 7, 1e-5);
  EXPECT_NEAR(pts.back().F, 1.0, 1e-5);
  EXPECT_NEAR(pts.back().G, 1.0 / 3, 1e-5);
}

TEST(Sweep, NearTieAtTheEdgeIsReportedAsDegenerate) {
  // At p = 1 - 1e-8 the top gap of R_p falls below the tie threshold.
  auto c = sweep_config(2, 5, 2);
  c.p_min = 0.5;
  c.p_max = 1 - 1e-8;
  const auto record = run_sweep(c);
  EXPECT_FALSE(record.pass);
  EXPECT_EQ(record.exit_code, kExitDegenerate);
  EXPECT_EQ(record.report.at("degenerate_points"), 1);
}

TEST(Sweep, CsvHasSeventeenDigitsAndRoundTrips) {
  const auto pts = run_sweep(sweep_config(2, 2, 7)).curves.front().points;
  const auto lines = lines_of(to_csv(pts));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::istringstream is(lines[i + 1]);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(is, cell, ',')) cells.push_back(std::stod(cell));
    ASSERT_EQ(cells.size(), 7u);
    EXPECT_EQ(cells[0], pts[i].p);
    EXPECT_EQ(cells[1], pts[i].F);
    EXPECT_EQ(cells[2], pts[i].G);
    EXPECT_EQ(cells[3], pts[i].lambda_max);
  }
}

TEST(Sweep, MatchesGoldenFile) {
  const auto csv = to_csv(run_sweep(sweep_config(1, 2, 5)).curves.front().points);
  EXPECT_EQ(csv, slurp(fs::path(MDM_GOLDEN_DIR) / "sweep_N1_d2_grid5.csv"));
}

TEST(Json, SchemaAndVersion) {
  auto c = sweep_config(1, 2, 3);
  const auto j = to_json(run_sweep(c));
  EXPECT_EQ(j.at("schema"), std::string(kSchema));
  EXPECT_EQ(j.at("version"), std::string(kToolVersion));
  EXPECT_EQ(j.at("command"), "sweep");
  EXPECT_EQ(j.at("config").at("N"), 1);
  EXPECT_EQ(j.at("curves").at(0).at("points").size(), 3u);
  EXPECT_TRUE(j.at("pass").get<bool>());
}

TEST(VerifyQubit, PassesAndForcesQubits) {
  RunConfig c;
  c.command = Command::kVerifyQubit;
  c.local_dim = 7;
  for (int n = 1; n <= 4; ++n) {
    c.copies = n;
    const auto record = run_verify_qubit(c);
    EXPECT_TRUE(record.pass) << record.report.dump();
    EXPECT_EQ(record.exit_code, kExitPass);
    EXPECT_LT(record.report.at("tradeoff_residual").at("max").get<double>(), 1e-8);
    EXPECT_LT(record.report.at("spectrum_residual").at("max").get<double>(), 1e-10);
  }
}

TEST(VerifyQubit, CorruptedEstimationOperatorFails) {
  RunConfig c;
  c.command = Command::kVerifyQubit;
  c.copies = 2;
  c.corrupt_rg = true;
  const auto record = run_verify_qubit(c);
  EXPECT_FALSE(record.pass);
  EXPECT_EQ(record.exit_code, kExitCheckFailed);
  EXPECT_TRUE(record.report.at("tradeoff_residual").contains("worst_p"));
}

TEST(VerifyQudit, ClosedFormAtSeveralSizes) {
  RunConfig c;
  c.command = Command::kVerifyQudit;
  for (auto [n, d] : {std::pair{2, 3}, {2, 4}, {2, 5}, {3, 3}, {1, 4}}) {
    c.copies = n;
    c.local_dim = d;
    const auto record = run_verify_qudit(c);
    EXPECT_TRUE(record.pass) << n << ' ' << d << ' ' << record.report.dump();
    EXPECT_LT(record.report.at("support_residual").at("max").get<double>(), 1e-8);
  }
  c.copies = 2;
  c.local_dim = 3;
  c.corrupt_rg = true;
  EXPECT_EQ(run_verify_qudit(c).exit_code, kExitCheckFailed);
}

TEST(VerifyQudit, SingleCopyIsTheSingleQuditTradeoff) {
  const auto pts = run_sweep(sweep_config(1, 4, 21)).curves.front().points;
  for (const auto& pt : pts) EXPECT_NEAR(pt.F, analytic::qudit_tradeoff_F(1, 4, pt.G), 1e-8);
}

TEST(McCheck, PassesAtFullSampleSize) {
  RunConfig c;
  c.command = Command::kMcCheck;
  for (auto [n, d] : {std::pair{1, 2}, {2, 3}}) {
    c.copies = n;
    c.local_dim = d;
    c.threads = 4;
    const auto record = run_mc_check(c);
    EXPECT_TRUE(record.pass) << record.report.dump(2);
    EXPECT_EQ(record.report.at("rf").at("seed"), c.seed);
  }
}

TEST(McCheck, TinySampleRespectsStrictness) {
  RunConfig c;
  c.command = Command::kMcCheck;
  c.samples = 10;
  const auto strict = run_mc_check(c);
  c.strict = false;
  const auto lax = run_mc_check(c);
  EXPECT_EQ(lax.exit_code, kExitPass);
  EXPECT_EQ(strict.pass, lax.pass);
  EXPECT_EQ(strict.exit_code, strict.pass ? kExitPass : kExitCheckFailed);
  EXPECT_TRUE(to_json(strict).at("report").contains("completeness"));
}

TEST(Figure, QubitCurvesAndEndpoints) {
  const auto dir = scratch_dir("fig1");
  RunConfig c;
  c.command = Command::kFigure;
  c.figure = 1;
  c.grid_points = 21;
  c.output_path = dir.string();
  c.format = Format::kSvg;
  const auto record = run_figure(c);
  ASSERT_EQ(record.curves.size(), 4u);
  emit(record);
  for (int n = 1; n <= 4; ++n) {
    const auto& pts = record.curves[n - 1].points;
    EXPECT_NEAR(pts.front().F, (n + 1.0) / (n + 2), 1e-10);
    EXPECT_NEAR(pts.front().G, (n + 1.0) / (n + 2), 1e-10);
    EXPECT_NEAR(pts.back().F, 1.0, 1e-10);
    EXPECT_NEAR(pts.back().G, n / (n + 1.0), 1e-10);
    EXPECT_TRUE(fs::exists(dir / ("fig1_N" + std::to_string(n) + "_d2.csv")));
  }
  const std::string svg = slurp(dir / "fig1.svg");
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::size_t circles = 0;
  for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
  EXPECT_EQ(circles, 4u * record.curves.front().points.size());
}

TEST(Figure, QuditFigureSharesTheTwoCopyQubitCurve) {
  const auto dir = scratch_dir("fig2");
  RunConfig c;
  c.command = Command::kFigure;
  c.grid_points = 11;
  c.output_path = dir.string();
  c.figure = 1;
  const auto fig1 = run_figure(c);
  c.figure = 2;
  const auto fig2 = run_figure(c);
  ASSERT_EQ(fig2.curves.size(), 4u);
  EXPECT_EQ(to_csv(fig2.curves[0].points), to_csv(fig1.curves[1].points));
  for (int d = 2; d <= 5; ++d) EXPECT_EQ(fig2.curves[d - 2].local_dim, d);
}

TEST(Tool, SweepIsByteIdenticalAcrossRuns) {
  const auto dir = scratch_dir("tool_sweep");
  const auto a = dir / "a.csv", b = dir / "b.csv";
  EXPECT_EQ(run_tool("--command sweep --N 2 --d 3 --grid 11 --out " + a.string(), dir).exit_code, 0);
  EXPECT_EQ(run_tool("--command sweep --N 2 --d 3 --grid 11 --out " + b.string(), dir).exit_code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(lines_of(slurp(a)).size(), 12u);
  EXPECT_FALSE(fs::exists(dir / "a.csv.tmp"));
}

TEST(Tool, StdoutGolden) {
  const auto dir = scratch_dir("tool_golden");
  const auto r = run_tool("--N 1 --d 2 --grid 5", dir);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, slurp(fs::path(MDM_GOLDEN_DIR) / "sweep_N1_d2_grid5.csv"));
}

TEST(Tool, ExitCodes) {
  const auto dir = scratch_dir("tool_exit");
  EXPECT_EQ(run_tool("--command verify-qubit --N 2", dir).exit_code, kExitPass);
  EXPECT_EQ(run_tool("--command verify-qubit --N 2 --corrupt-rg", dir).exit_code, kExitCheckFailed);
  EXPECT_EQ(run_tool("--command sweep --p-min 0", dir).exit_code, kExitInvalidConfig);
  EXPECT_EQ(run_tool("--command sweep --grid 1", dir).exit_code, kExitInvalidConfig);
  EXPECT_EQ(run_tool("--command nonsense", dir).exit_code, kExitInvalidConfig);
  EXPECT_EQ(run_tool("--N two", dir).exit_code, kExitInvalidConfig);
  EXPECT_EQ(run_tool("--command verify-qudit --d 2", dir).exit_code, kExitInvalidConfig);
  EXPECT_EQ(run_tool("--command figure --figure 3 --out " + dir.string(), dir).exit_code, kExitInvalidConfig);
  EXPECT_EQ(run_tool("--command sweep --N 2 --d 5 --grid 2 --p-min 0.5 --p-max 0.99999999", dir).exit_code,
            kExitDegenerate);
  EXPECT_EQ(run_tool("--command sweep --out /nonexistent_dir/x.csv", dir).exit_code, kExitRuntimeError);
  EXPECT_EQ(run_tool("--command mc-check --samples 10 --no-strict", dir).exit_code, kExitPass);
}

TEST(Tool, VersionAndJson) {
  const auto dir = scratch_dir("tool_json");
  const auto v = run_tool("--version", dir);
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_NE(v.out.find(std::string(kToolVersion)), std::string::npos);
  const auto r = run_tool("--command verify-qudit --N 2 --d 3 --grid 11", dir);
  EXPECT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("schema"), std::string(kSchema));
  EXPECT_EQ(j.at("version"), std::string(kToolVersion));
  EXPECT_TRUE(j.at("pass").get<bool>());
}

}  // namespace
}  // namespace mdm::cli
