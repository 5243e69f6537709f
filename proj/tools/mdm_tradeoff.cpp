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

// Command-line driver: trade-off sweeps, verification suites, Monte Carlo
// cross-checks and figure data.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mdm/cli.hpp"

int main(int argc, char** argv) {
  using namespace mdm::cli;

  CLI::App app{"Optimal estimation/disturbance trade-off for N copies of a pure qudit"};
  app.set_version_flag("--version", std::string(kToolVersion));

  RunConfig config;
  std::string command = "sweep";
  std::string format = "csv";
  app.add_option("--command", command, "sweep | verify-qubit | verify-qudit | mc-check | figure")
      ->check(CLI::IsMember({"sweep", "verify-qubit", "verify-qudit", "mc-check", "figure"}));
  app.add_option("--N", config.copies, "number of input copies")->capture_default_str();
  app.add_option("--d", config.local_dim, "local dimension")->capture_default_str();
  app.add_option("--grid", config.grid_points, "number of p values")->capture_default_str();
  app.add_option("--p-min", config.p_min, "smallest p (exclusive of 0)")->capture_default_str();
  app.add_option("--p-max", config.p_max, "largest p (exclusive of 1)")->capture_default_str();
  app.add_option("--samples", config.samples, "Monte Carlo samples")->capture_default_str();
  app.add_option("--seed", config.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--out", config.output_path, "output file (figure: output directory)");
  app.add_option("--format", format, "csv | json | svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--figure", config.figure, "figure to reproduce: 1 (qubits) or 2 (qudits)")->capture_default_str();
  app.add_option("--threads", config.threads, "worker threads")->capture_default_str();
  app.add_flag("--strict,!--no-strict", config.strict, "statistical failures set a nonzero exit code");
  app.add_flag("--corrupt-rg", config.corrupt_rg, "negative control: verify against a broken R_G")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidConfig;
  }

  try {
    config.command = parse_command(command);
    config.format = parse_format(format);
    const ResultRecord record = run(config);
    std::cout << emit(record);
    if (!record.pass) std::cerr << command << ": checks failed (exit " << record.exit_code << ")\n";
    return record.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}
