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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mdm/solver.hpp"

namespace mdm::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSchema = "mdm-tradeoff/1";

/// Process exit codes.
enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailed = 1,
  kExitInvalidConfig = 2,
  kExitDegenerate = 3,
  kExitRuntimeError = 4,  // I/O or numerical failure
};

enum class Command { kSweep, kVerifyQubit, kVerifyQudit, kMcCheck, kFigure };
enum class Format { kCsv, kJson, kSvg };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Command command = Command::kSweep;
  int copies = 1;
  int local_dim = 2;
  int grid_points = 101;
  double p_min = 0.005;
  double p_max = 0.995;
  std::int64_t samples = 200'000;
  std::uint64_t seed = 20061017;
  std::string output_path;  // empty: stdout
  Format format = Format::kCsv;
  bool strict = true;
  int figure = 1;
  unsigned threads = 1;
  bool corrupt_rg = false;  // negative-control hook for the verify commands
};

Command parse_command(std::string_view name);
std::string_view command_name(Command command);
Format parse_format(std::string_view name);
std::string_view format_name(Format format);

/// Throws ConfigError when a field is out of range.
void validate(const RunConfig& config);

struct Curve {
  int copies;
  int local_dim;
  std::vector<TradeoffPoint<double>> points;
};

struct ResultRecord {
  RunConfig config;
  bool pass = true;
  int exit_code = kExitPass;
  std::vector<Curve> curves;  // sweep: one curve; figure: one per (N, d)
  nlohmann::ordered_json report;
  double wall_seconds = 0.0;
};

ResultRecord run_sweep(const RunConfig& config);
ResultRecord run_verify_qubit(const RunConfig& config);
ResultRecord run_verify_qudit(const RunConfig& config);
ResultRecord run_mc_check(const RunConfig& config);
ResultRecord run_figure(const RunConfig& config);

/// Dispatches on config.command. Validation failures surface as ConfigError.
ResultRecord run(const RunConfig& config);

/// Header "p,F,G,lambda_max,alpha,beta,gap", 17 significant digits.
std::string to_csv(const std::vector<TradeoffPoint<double>>& points);

/// Versioned JSON document: schema, version, config echo, report, pass flag.
nlohmann::ordered_json to_json(const ResultRecord& record);

/// Single-file vector plot of F against G, one polyline and one marker per point.
std::string to_svg(const std::vector<Curve>& curves, std::string_view title);

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::string& path, std::string_view content);

/// Writes the command's artefacts and returns what belongs on stdout.
std::string emit(const ResultRecord& record);

}  // namespace mdm::cli
