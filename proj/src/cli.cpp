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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "mdm/analytic.hpp"
#include "mdm/haar_mc.hpp"

namespace mdm::cli {

namespace {

using Json = nlohmann::ordered_json;

// Analytic-vs-numeric residuals; an order of magnitude above eigensolver noise.
constexpr double kResidualTolerance = 1e-8;
constexpr double kLagrangianTolerance = 1e-10;
// Statistical checks pass within this many standard errors, or under the caps.
constexpr double kStderrMultiple = 5.0;
constexpr double kFrobeniusCap = 0.02;
constexpr double kCompletenessCap = 0.03;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Finite-or-null, so the JSON stays valid when a standard error is infinite.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = command_name(c.command);
  j["N"] = c.copies;
  j["d"] = c.local_dim;
  j["grid"] = c.grid_points;
  j["p_min"] = c.p_min;
  j["p_max"] = c.p_max;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["out"] = c.output_path;
  j["format"] = format_name(c.format);
  j["strict"] = c.strict;
  if (c.command == Command::kFigure) j["figure"] = c.figure;
  if (c.corrupt_rg) j["corrupt_rg"] = true;
  return j;
}

Json point_json(const TradeoffPoint<double>& pt) {
  return Json{{"p", pt.p},         {"F", pt.F},       {"G", pt.G},     {"lambda_max", pt.lambda_max},
              {"alpha", pt.alpha}, {"beta", pt.beta}, {"gap", pt.gap}, {"degenerate", pt.degenerate}};
}

std::vector<double> config_grid(const RunConfig& c) { return uniform_grid(c.grid_points, c.p_min, c.p_max); }

// Off-by-one in the symmetric index of the reference block: a deliberately
// wrong R_G for the verify commands' negative control.
void corrupt(SymOperator<double>& rg) {
  const int d = rg.local_dim;
  const Eigen::Index sym_dim = rg.dim() / d;
  SymOperator<double> shifted = rg;
  for (Eigen::Index m = 0; m < sym_dim; ++m)
    for (Eigen::Index n = 0; n < sym_dim; ++n)
      for (int a = 0; a < d; ++a)
        shifted.matrix(product_index(m, a, d), product_index(n, a, d)) =
            rg((m + 1) % sym_dim, 0, (n + 1) % sym_dim, 0);
  rg = std::move(shifted);
}

struct Worst {
  double value = 0.0;
  double p = std::numeric_limits<double>::quiet_NaN();

  void update(double residual, double at) {
    if (!(residual <= value)) {  // NaN counts as worst
      value = residual;
      p = at;
    }
  }
  Json json() const { return Json{{"max", number(value)}, {"worst_p", number(p)}}; }
};

// Residuals shared by both verify commands.
struct CurveCheck {
  Worst tradeoff;
  Worst lagrangian;
  Worst support;
  double endpoint = 0.0;
  bool degenerate = false;
};

template <typename Formula>
CurveCheck check_curve(const SymOperator<double>& rf, const SymOperator<double>& rg,
                       const std::vector<TradeoffPoint<double>>& points, Formula formula) {
  const int n = rf.copies;
  const int d = rf.local_dim;
  const SymBasis basis(n, d);
  const double dim = static_cast<double>(basis.size());
  CurveCheck check;
  for (const auto& pt : points) {
    double residual;
    try {
      residual = std::abs(pt.F - formula(pt.G));
    } catch (const std::domain_error&) {
      residual = std::numeric_limits<double>::infinity();
    }
    check.tradeoff.update(residual, pt.p);
    check.lagrangian.update(std::abs(pt.p * pt.F + (1 - pt.p) * pt.G - dim * pt.lambda_max), pt.p);
    const auto map = optimal_map(rf, rg, pt.p);
    check.support.update(1.0 - ansatz_support_fraction(map.chi, basis), pt.p);
    check.degenerate = check.degenerate || pt.degenerate;
  }
  const auto ends = endpoint_maps(n, d);
  const auto est = fidelities(ends.estimation, rf, rg);
  const auto ident = fidelities(ends.identity, rf, rg);
  const double top = (n + 1.0) / (n + d);
  check.endpoint = std::max({std::abs(est.output - top), std::abs(est.estimation - top),
                             std::abs(ident.output - 1.0), std::abs(ident.estimation - n / (n + d - 1.0))});
  return check;
}

void finish(ResultRecord& record, bool pass) {
  record.pass = pass;
  record.exit_code = pass ? kExitPass : kExitCheckFailed;
  record.report["pass"] = pass;
}

Curve closed_curve(int copies, int local_dim, const std::vector<double>& grid) {
  const auto rf = build_RF<double>(copies, local_dim);
  const auto rg = build_RG(rf);
  const double dim = static_cast<double>(dimension(copies, local_dim));
  const auto ends = endpoint_maps(copies, local_dim);

  auto endpoint_row = [&](double p, const ChoiVector<double>& chi) {
    const auto top = max_eigenpair(build_Rp(rf, rg, p));
    const auto fid = fidelities(chi, rf, rg);
    const double alpha = chi.amplitudes(0) / std::sqrt(dim);
    return TradeoffPoint<double>{p,     fid.output, fid.estimation, top.value, alpha,
                                 std::sqrt(std::max(1 - alpha * alpha, 0.0)), top.gap, true};
  };

  Curve curve{copies, local_dim, {}};
  curve.points.push_back(endpoint_row(0.0, ends.estimation));
  for (const auto& pt : tradeoff_sweep(rf, rg, grid)) curve.points.push_back(pt);
  curve.points.push_back(endpoint_row(1.0, ends.identity));
  return curve;
}

}  // namespace

Command parse_command(std::string_view name) {
  if (name == "sweep") return Command::kSweep;
  if (name == "verify-qubit") return Command::kVerifyQubit;
  if (name == "verify-qudit") return Command::kVerifyQudit;
  if (name == "mc-check") return Command::kMcCheck;
  if (name == "figure") return Command::kFigure;
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command command) {
  switch (command) {
    case Command::kSweep: return "sweep";
    case Command::kVerifyQubit: return "verify-qubit";
    case Command::kVerifyQudit: return "verify-qudit";
    case Command::kMcCheck: return "mc-check";
    case Command::kFigure: return "figure";
  }
  return "?";
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  if (name == "svg") return Format::kSvg;
  throw ConfigError("unknown format '" + std::string(name) + "'");
}

std::string_view format_name(Format format) {
  switch (format) {
    case Format::kCsv: return "csv";
    case Format::kJson: return "json";
    case Format::kSvg: return "svg";
  }
  return "?";
}

void validate(const RunConfig& c) {
  if (c.copies < 1) throw ConfigError("N must be >= 1");
  if (c.local_dim < 2) throw ConfigError("d must be >= 2");
  if (c.grid_points < 2) throw ConfigError("grid must have at least 2 points");
  if (!(c.p_min > 0.0 && c.p_min < c.p_max && c.p_max < 1.0)) throw ConfigError("need 0 < p-min < p-max < 1");
  if (c.samples < 1) throw ConfigError("samples must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.command == Command::kFigure) {
    if (c.figure != 1 && c.figure != 2) throw ConfigError("figure must be 1 or 2");
    if (c.output_path.empty()) throw ConfigError("figure needs --out pointing at a directory");
    return;
  }
  if (c.command == Command::kVerifyQudit && c.local_dim < 3) throw ConfigError("verify-qudit needs d >= 3");
  const int d = c.command == Command::kVerifyQubit ? 2 : c.local_dim;
  if (dimension(c.copies, d) * static_cast<std::uint64_t>(d) > kMaxOperatorDimension) {
    throw ConfigError("D(N,d)*d exceeds the dense operator limit");
  }
  if (c.command == Command::kMcCheck) {
    try {
      full_space_dimension(c.copies, c.local_dim);
    } catch (const std::length_error& e) {
      throw ConfigError(e.what());
    }
  }
}

ResultRecord run_sweep(const RunConfig& config) {
  validate(config);
  Stopwatch clock;
  ResultRecord record;
  record.config = config;
  Curve curve{config.copies, config.local_dim,
              tradeoff_sweep(config.copies, config.local_dim, config_grid(config), config.threads)};
  const auto degenerate = std::count_if(curve.points.begin(), curve.points.end(),
                                        [](const auto& pt) { return pt.degenerate; });
  record.report["points"] = curve.points.size();
  record.report["degenerate_points"] = degenerate;
  record.curves.push_back(std::move(curve));
  record.pass = degenerate == 0;
  record.exit_code = record.pass ? kExitPass : kExitDegenerate;
  record.report["pass"] = record.pass;
  record.wall_seconds = clock.seconds();
  return record;
}

ResultRecord run_verify_qubit(const RunConfig& input) {
  RunConfig config = input;
  config.local_dim = 2;
  validate(config);
  Stopwatch clock;
  ResultRecord record;
  record.config = config;
  const int n = config.copies;

  const auto rf = build_RF<double>(n, 2);
  auto rg = build_RG(rf);
  if (config.corrupt_rg) corrupt(rg);
  const auto grid = config_grid(config);
  const auto points = tradeoff_sweep(rf, rg, grid, config.threads);
  const auto check = check_curve(rf, rg, points, [n](double g) { return analytic::qubit_tradeoff_F(n, g); });

  Worst spectrum;
  for (double p : grid) {
    const Eigen::VectorXd numeric = max_eigenpair(build_Rp(rf, rg, p)).spectrum;
    spectrum.update((numeric - analytic::qubit_spectrum(n, p)).cwiseAbs().maxCoeff(), p);
  }

  record.report["tradeoff_residual"] = check.tradeoff.json();
  record.report["spectrum_residual"] = spectrum.json();
  record.report["lagrangian_residual"] = check.lagrangian.json();
  record.report["endpoint_residual"] = check.endpoint;
  record.report["tolerance"] = kResidualTolerance;
  finish(record, check.tradeoff.value < kResidualTolerance && spectrum.value < kResidualTolerance &&
                     check.endpoint < kResidualTolerance && check.lagrangian.value < kLagrangianTolerance);
  if (check.degenerate) record.exit_code = record.pass ? kExitDegenerate : record.exit_code;
  record.wall_seconds = clock.seconds();
  return record;
}

ResultRecord run_verify_qudit(const RunConfig& config) {
  validate(config);
  Stopwatch clock;
  ResultRecord record;
  record.config = config;
  const int n = config.copies;
  const int d = config.local_dim;

  const auto rf = build_RF<double>(n, d);
  auto rg = build_RG(rf);
  if (config.corrupt_rg) corrupt(rg);
  const auto points = tradeoff_sweep(rf, rg, config_grid(config), config.threads);
  const auto check = check_curve(rf, rg, points, [n, d](double g) { return analytic::qudit_tradeoff_F(n, d, g); });

  record.report["tradeoff_residual"] = check.tradeoff.json();
  record.report["support_residual"] = check.support.json();
  record.report["lagrangian_residual"] = check.lagrangian.json();
  record.report["endpoint_residual"] = check.endpoint;
  record.report["tolerance"] = kResidualTolerance;
  finish(record, check.tradeoff.value < kResidualTolerance && check.support.value < kResidualTolerance &&
                     check.endpoint < kResidualTolerance && check.lagrangian.value < kLagrangianTolerance);
  if (check.degenerate) record.exit_code = record.pass ? kExitDegenerate : record.exit_code;
  record.wall_seconds = clock.seconds();
  return record;
}

ResultRecord run_mc_check(const RunConfig& config) {
  validate(config);
  Stopwatch clock;
  ResultRecord record;
  record.config = config;
  const int n = config.copies;
  const int d = config.local_dim;
  const auto rf = build_RF<double>(n, d);
  const auto rg = build_RG(rf);
  bool pass = true;

  {
    const auto estimate = mc::mc_RF(n, d, config.samples, config.seed, config.threads);
    const Eigen::MatrixXcd diff = estimate.value - rf.matrix.cast<std::complex<double>>();
    const double frobenius = diff.norm();
    const double max_dev = diff.cwiseAbs().maxCoeff();
    const bool ok = frobenius < kFrobeniusCap || max_dev <= kStderrMultiple * estimate.std_error;
    pass = pass && ok;
    record.report["rf"] = Json{{"frobenius", frobenius},
                               {"max_entry_deviation", max_dev},
                               {"stderr", number(estimate.std_error)},
                               {"seed", estimate.seed},
                               {"samples", estimate.samples},
                               {"pass", ok}};
  }

  const auto ends = endpoint_maps(n, d);
  const auto interior = optimal_map(rf, rg, 0.5);
  struct Case {
    const char* name;
    const ChoiVector<double>* chi;
  };
  const Case cases[] = {{"estimation_end", &ends.estimation}, {"identity_end", &ends.identity},
                        {"interior_p0.5", &interior.chi}};
  Json fid_report = Json::array();
  std::uint64_t seed = config.seed + 1;
  for (const auto& c : cases) {
    const auto exact = fidelities(*c.chi, rf, rg);
    const auto est = mc::mc_fidelities(*c.chi, config.samples, seed++, config.threads);
    auto entry = [&](const mc::McEstimate<double>& e, double truth) {
      const double dev = std::abs(e.value - truth);
      const bool ok = dev <= kStderrMultiple * e.std_error + 1e-12;
      pass = pass && ok;
      return Json{{"estimate", e.value},   {"exact", truth},           {"stderr", number(e.std_error)},
                  {"z", number(dev / e.std_error)}, {"seed", e.seed}, {"pass", ok}};
    };
    fid_report.push_back(Json{{"map", c.name},
                              {"F", entry(est.output, exact.output)},
                              {"G", entry(est.estimation, exact.estimation)}});
  }
  record.report["fidelities"] = std::move(fid_report);

  {
    const auto comp = mc::mc_completeness(interior.chi, config.samples, seed, config.threads);
    const bool ok = comp.deviation.value < kCompletenessCap ||
                    comp.deviation.value <= kStderrMultiple * comp.deviation.std_error;
    pass = pass && ok;
    record.report["completeness"] = Json{{"deviation", comp.deviation.value},
                                         {"stderr", number(comp.deviation.std_error)},
                                         {"seed", comp.deviation.seed},
                                         {"pass", ok}};
  }

  record.pass = pass;
  record.report["pass"] = pass;
  record.exit_code = pass || !config.strict ? kExitPass : kExitCheckFailed;
  record.wall_seconds = clock.seconds();
  return record;
}

ResultRecord run_figure(const RunConfig& config) {
  validate(config);
  Stopwatch clock;
  ResultRecord record;
  record.config = config;
  const auto grid = config_grid(config);
  if (config.figure == 1) {
    for (int n = 1; n <= 4; ++n) record.curves.push_back(closed_curve(n, 2, grid));
  } else {
    for (int d = 2; d <= 5; ++d) record.curves.push_back(closed_curve(2, d, grid));
  }
  Json curves = Json::array();
  for (const auto& c : record.curves) {
    curves.push_back(Json{{"N", c.copies}, {"d", c.local_dim}, {"rows", c.points.size()}});
  }
  record.report["curves"] = std::move(curves);
  record.report["pass"] = true;
  record.wall_seconds = clock.seconds();
  return record;
}

ResultRecord run(const RunConfig& config) {
  switch (config.command) {
    case Command::kSweep: return run_sweep(config);
    case Command::kVerifyQubit: return run_verify_qubit(config);
    case Command::kVerifyQudit: return run_verify_qudit(config);
    case Command::kMcCheck: return run_mc_check(config);
    case Command::kFigure: return run_figure(config);
  }
  throw ConfigError("unknown command");
}

std::string to_csv(const std::vector<TradeoffPoint<double>>& points) {
  std::string out = "p,F,G,lambda_max,alpha,beta,gap\n";
  for (const auto& pt : points) {
    for (double v : {pt.p, pt.F, pt.G, pt.lambda_max, pt.alpha, pt.beta}) out += format_double(v) + ',';
    out += format_double(pt.gap) + '\n';
  }
  return out;
}

Json to_json(const ResultRecord& record) {
  Json j;
  j["schema"] = kSchema;
  j["version"] = kToolVersion;
  j["command"] = command_name(record.config.command);
  j["config"] = config_json(record.config);
  j["pass"] = record.pass;
  j["exit_code"] = record.exit_code;
  j["wall_time_s"] = record.wall_seconds;
  j["report"] = record.report;
  if (record.config.command == Command::kSweep) {
    Json curves = Json::array();
    for (const auto& c : record.curves) {
      Json pts = Json::array();
      for (const auto& pt : c.points) pts.push_back(point_json(pt));
      curves.push_back(Json{{"N", c.copies}, {"d", c.local_dim}, {"points", std::move(pts)}});
    }
    j["curves"] = std::move(curves);
  }
  return j;
}

std::string to_svg(const std::vector<Curve>& curves, std::string_view title) {
  constexpr double kWidth = 640, kHeight = 480, kMargin = 60;
  double g_lo = 1, g_hi = 0, f_lo = 1;
  for (const auto& c : curves) {
    const double n = c.copies, d = c.local_dim;
    g_lo = std::min(g_lo, n / (n + d));
    g_hi = std::max(g_hi, (n + 1) / (n + d));
    for (const auto& pt : c.points) f_lo = std::min(f_lo, pt.F);
  }
  if (!(g_hi > g_lo)) g_hi = g_lo + 1e-3;
  if (!(f_lo < 1)) f_lo = 1 - 1e-3;
  auto x = [&](double g) { return kMargin + (g - g_lo) / (g_hi - g_lo) * (kWidth - 2 * kMargin); };
  auto y = [&](double f) { return kHeight - kMargin - (f - f_lo) / (1 - f_lo) * (kHeight - 2 * kMargin); };

  static constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os.precision(6);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<title>" << title << "</title>\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin << "\" y2=\""
     << kHeight - kMargin << "\"/>\n"
     << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
     << "\"/>\n"
     << "</g>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">G [" << g_lo << ", "
     << g_hi << "]</text>\n"
     << "<text x=\"15\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 15 " << kHeight / 2
     << ")\" text-anchor=\"middle\">F [" << f_lo << ", 1]</text>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* colour = kColours[i % std::size(kColours)];
    os << "<g id=\"curve-N" << c.copies << "-d" << c.local_dim << "\" fill=\"" << colour << "\">\n"
       << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      os << (k ? " " : "") << x(c.points[k].G) << ',' << y(c.points[k].F);
    }
    os << "\"/>\n";
    for (const auto& pt : c.points) {
      os << "<circle cx=\"" << x(pt.G) << "\" cy=\"" << y(pt.F) << "\" r=\"1.5\" data-p=\"" << format_double(pt.p)
         << "\" data-G=\"" << format_double(pt.G) << "\" data-F=\"" << format_double(pt.F) << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, target);
}

std::string emit(const ResultRecord& record) {
  const auto& c = record.config;
  switch (c.command) {
    case Command::kSweep: {
      std::string content;
      switch (c.format) {
        case Format::kCsv: content = to_csv(record.curves.front().points); break;
        case Format::kJson: content = to_json(record).dump(2) + "\n"; break;
        case Format::kSvg: content = to_svg(record.curves, "sweep"); break;
      }
      if (c.output_path.empty()) return content;
      write_atomic(c.output_path, content);
      Json summary = to_json(record);
      summary.erase("curves");
      return summary.dump() + "\n";
    }
    case Command::kFigure: {
      namespace fs = std::filesystem;
      const fs::path dir(c.output_path);
      fs::create_directories(dir);
      Json summary = to_json(record);
      Json files = Json::array();
      const std::string stem = "fig" + std::to_string(c.figure);
      for (const auto& curve : record.curves) {
        const auto name = stem + "_N" + std::to_string(curve.copies) + "_d" + std::to_string(curve.local_dim) + ".csv";
        write_atomic((dir / name).string(), to_csv(curve.points));
        files.push_back(name);
      }
      if (c.format == Format::kSvg) {
        write_atomic((dir / (stem + ".svg")).string(), to_svg(record.curves, stem));
        files.push_back(stem + ".svg");
      }
      summary["files"] = std::move(files);
      return summary.dump(2) + "\n";
    }
    default: {
      const std::string content = to_json(record).dump(2) + "\n";
      if (!c.output_path.empty()) write_atomic(c.output_path, content);
      return content;
    }
  }
}

}  // namespace mdm::cli
