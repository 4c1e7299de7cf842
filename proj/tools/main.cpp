// blockboot command-line tool. Links only the C API from blockboot.h.
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blockboot.h"

#ifndef BLOCKBOOT_DEFAULT_REFERENCE_CSV
#define BLOCKBOOT_DEFAULT_REFERENCE_CSV "data/reference_coverage.csv"
#endif

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitConfig = 4;

int exit_code_for(bb_status status) {
  switch (status) {
    case BB_OK: return 0;
    case BB_ERROR_INVALID_ARGUMENT: return kExitUsage;
    case BB_ERROR_NUMERIC: return kExitNumeric;
    case BB_ERROR_CONFIG: return kExitConfig;
    case BB_ERROR_IO: return kExitUsage;
    case BB_ERROR_INTERNAL: return 1;
  }
  return 1;
}

int fail(bb_status status) {
  std::cerr << "error: " << bb_last_error() << " (" << bb_status_name(status) << ")\n";
  return exit_code_for(status);
}

// "auto" or a positive integer.
bool parse_length(const std::string& text, long& out) {
  if (text == "auto") {
    out = 0;
    return true;
  }
  try {
    size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size() || v < 1) return false;
    out = v;
    return true;
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

struct CoverageRow {
  std::string model, estimator, method;
  long n = 0;
  double alpha = 0.0;
  double coverage = 0.0;
};

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  double coef = 0.3;
  long burn_in = 500;
  long n = 0;
  std::uint64_t seed = 1;
  std::string out_path;
};

int run_simulate(const SimulateArgs& args) {
  std::vector<double> values(static_cast<std::size_t>(std::max(args.n, 1L)));
  const bb_status status = bb_simulate(args.model.c_str(), args.coef, args.burn_in, args.n,
                                       args.seed, values.data());
  if (status != BB_OK) return fail(status);

  std::ofstream out(args.out_path);
  if (!out) {
    std::cerr << "error: cannot open " << args.out_path << " for writing\n";
    return kExitUsage;
  }
  char buf[64];
  for (double v : values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
  out.close();
  if (!out) {
    std::cerr << "error: failed writing " << args.out_path << "\n";
    return kExitUsage;
  }
  std::cerr << "model=" << args.model << " n=" << args.n << "\n";
  return 0;
}

// --- bound ------------------------------------------------------------------

struct BoundArgs {
  std::string in_path;
  std::string estimator = "mean";
  double alpha = 0.05;
  std::string ell = "auto";
  std::string k = "auto";
  long b1 = 1000;
  long b2 = 1000;
  std::string method = "basic";
  double gk_c = 0.5;
  std::uint64_t seed = 1;
};

int run_bound(const BoundArgs& args) {
  std::ifstream in(args.in_path);
  if (!in) {
    std::cerr << "error: cannot open input file " << args.in_path << "\n";
    return kExitUsage;
  }
  std::vector<double> series;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      size_t pos = 0;
      series.push_back(std::stod(line, &pos));
    } catch (...) {
      std::cerr << "error: input line is not a number: " << line << "\n";
      return kExitUsage;
    }
  }

  bb_bound_options options{};
  options.estimator = args.estimator.c_str();
  options.method = args.method.c_str();
  options.alpha = args.alpha;
  if (!parse_length(args.ell, options.ell) || !parse_length(args.k, options.k)) {
    std::cerr << "error: --ell/--k must be \"auto\" or a positive integer\n";
    return kExitUsage;
  }
  options.b1 = args.b1;
  options.b2 = args.b2;
  options.gk_c = args.gk_c;
  options.seed = args.seed;

  bb_bound_report report{};
  const bb_status status =
      bb_bound(series.data(), static_cast<long>(series.size()), &options, &report);
  if (status != BB_OK) return fail(status);

  char buf[64];
  std::printf("n=%zu\n", series.size());
  std::printf("estimator=%s\n", args.estimator.c_str());
  std::printf("method=%s\n", args.method.c_str());
  std::printf("alpha=%g\n", args.alpha);
  std::printf("ell=%ld\n", report.ell);
  std::printf("k=%ld\n", report.k);
  std::snprintf(buf, sizeof(buf), "%.10g", report.theta_hat);
  std::printf("theta_hat=%s\n", buf);
  std::snprintf(buf, sizeof(buf), "%.10g", report.bound);
  std::printf("bound=%s\n", buf);
  if (args.method == "calibrated") std::printf("alpha_hat=%.10g\n", report.alpha_hat);
  if (args.method == "studentized" || args.method == "dh" || args.method == "gk")
    std::printf("tau=%.10g\n", report.tau);
  if (args.method == "dh" || args.method == "gk")
    std::printf("degenerate_resamples=%ld\n", report.degenerate_resamples);
  return 0;
}

// --- study ------------------------------------------------------------------

struct StudyArgs {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  std::string profile = "desk";
  bool allow_failures = false;
};

int run_study_cmd(const StudyArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) {
    std::cerr << "error: cannot open config file " << args.config_path << "\n";
    return kExitUsage;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string config_json = ss.str();

  bb_study* study = nullptr;
  bb_status status = bb_study_create(config_json.c_str(), args.profile.c_str(), &study);
  if (status != BB_OK) return fail(status);

  status = bb_study_run(study, args.threads);
  if (status != BB_OK) {
    bb_study_destroy(study);
    return fail(status);
  }

  const auto write_artifact = [&](const char* format, const std::string& path) -> int {
    char* text = nullptr;
    const bb_status st = bb_study_render(study, format, &text);
    if (st != BB_OK) return fail(st);
    std::ofstream out(path);
    if (!out) {
      bb_free_text(text);
      std::cerr << "error: cannot open " << path << " for writing\n";
      return kExitUsage;
    }
    out << text;
    bb_free_text(text);
    out.close();
    if (!out) {
      std::cerr << "error: failed writing " << path << "\n";
      return kExitUsage;
    }
    return 0;
  };

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  const std::string base = args.out_dir + "/";
  int rc = write_artifact("csv", base + "coverage.csv");
  if (rc == 0) rc = write_artifact("json", base + "coverage.json");
  if (rc == 0) {
    char* text = nullptr;
    const bb_status st = bb_study_render(study, "pretty", &text);
    if (st != BB_OK) {
      rc = fail(st);
    } else {
      std::cout << text;
      bb_free_text(text);
    }
  }

  long failures = 0;
  if (rc == 0) {
    const bb_status st = bb_study_total_failures(study, &failures);
    if (st != BB_OK) rc = fail(st);
  }
  bb_study_destroy(study);
  if (rc != 0) return rc;

  if (failures > 0) {
    std::cerr << "study finished with " << failures << " failed replication cells\n";
    if (!args.allow_failures) return kExitNumeric;
  }
  return 0;
}

// --- report -----------------------------------------------------------------

struct ReportArgs {
  std::string in_path;
  std::string against;
  std::string reference = BLOCKBOOT_DEFAULT_REFERENCE_CSV;
  double tolerance = 0.03;
};

int run_report(const ReportArgs& args) {
  static const std::string kComputedHeader =
      "model,estimator,method,n,alpha,ell,k,coverage,mc_se,r_eff,failures";
  static const std::string kReferenceHeader = "table,model,estimator,method,n,alpha,coverage";

  std::ifstream in(args.in_path);
  if (!in) {
    std::cerr << "error: cannot open " << args.in_path << "\n";
    return kExitUsage;
  }
  std::string line;
  if (!std::getline(in, line) || line != kComputedHeader) {
    std::cerr << "error: coverage CSV schema mismatch (expected header: " << kComputedHeader
              << ")\n";
    return kExitConfig;
  }
  std::vector<CoverageRow> computed;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 11) {
      std::cerr << "error: malformed coverage CSV row: " << line << "\n";
      return kExitConfig;
    }
    CoverageRow row;
    row.model = fields[0];
    row.estimator = fields[1];
    row.method = fields[2];
    try {
      row.n = std::stol(fields[3]);
      row.alpha = std::stod(fields[4]);
      row.coverage = std::stod(fields[7]);
    } catch (...) {
      std::cerr << "error: malformed coverage CSV row: " << line << "\n";
      return kExitConfig;
    }
    computed.push_back(row);
  }

  std::ifstream ref(args.reference);
  if (!ref) {
    std::cerr << "error: cannot open reference table file " << args.reference << "\n";
    return kExitUsage;
  }
  if (!std::getline(ref, line) || line != kReferenceHeader) {
    std::cerr << "error: reference CSV schema mismatch\n";
    return kExitConfig;
  }
  std::vector<CoverageRow> reference;
  while (std::getline(ref, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 7) {
      std::cerr << "error: malformed reference CSV row: " << line << "\n";
      return kExitConfig;
    }
    if (fields[0] != args.against) continue;
    CoverageRow row;
    row.model = fields[1];
    row.estimator = fields[2];
    row.method = fields[3];
    try {
      row.n = std::stol(fields[4]);
      row.alpha = std::stod(fields[5]);
      row.coverage = std::stod(fields[6]);
    } catch (...) {
      std::cerr << "error: malformed reference CSV row: " << line << "\n";
      return kExitConfig;
    }
    reference.push_back(row);
  }

  std::size_t matched = 0;
  std::size_t outside = 0;
  std::printf("%-7s %-11s %-5s %-6s %9s %9s %8s  %s\n", "model", "method", "n", "alpha",
              "computed", "reference", "diff", "check");
  for (const auto& c : computed) {
    for (const auto& r : reference) {
      if (c.model != r.model || c.method != r.method || c.n != r.n ||
          c.estimator != r.estimator || std::abs(c.alpha - r.alpha) > 1e-9)
        continue;
      ++matched;
      const double diff = c.coverage - r.coverage;
      const bool ok = std::abs(diff) <= args.tolerance;
      if (!ok) ++outside;
      std::printf("%-7s %-11s %-5ld %-6.3f %9.3f %9.3f %+8.3f  %s\n", c.model.c_str(),
                  c.method.c_str(), c.n, c.alpha, c.coverage, r.coverage, diff,
                  ok ? "ok" : "OUTSIDE");
    }
  }
  if (matched == 0) {
    std::printf("no matching cells\n");
    return 0;
  }
  std::printf("%zu cells compared against %s, %zu outside tolerance %.3f\n", matched,
              args.against.c_str(), outside, args.tolerance);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block bootstrap confidence bounds for stationary time series"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a time series file");
  simulate->add_option("--model", sim.model, "ar1 | ma1 | arch1")->required();
  simulate->add_option("--coef", sim.coef, "model coefficient (default 0.3)");
  simulate->add_option("--burn-in", sim.burn_in, "discarded initial observations")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--n", sim.n, "series length")->required();
  simulate->add_option("--seed", sim.seed, "rng seed");
  simulate->add_option("--out", sim.out_path, "output file (one value per line)")->required();

  BoundArgs bnd;
  auto* bound = app.add_subcommand("bound", "upper confidence bound for one series");
  bound->add_option("--in", bnd.in_path, "input series file (one value per line)")->required();
  bound->add_option("--estimator", bnd.estimator, "mean | variance | lag1");
  bound->add_option("--alpha", bnd.alpha, "nominal level in (0,1)");
  bound->add_option("--ell", bnd.ell, "first-level block length or \"auto\"");
  bound->add_option("--k", bnd.k, "second-level block length or \"auto\"");
  bound->add_option("--b1", bnd.b1, "first-level resamples");
  bound->add_option("--b2", bnd.b2, "second-level resamples");
  bound->add_option("--method", bnd.method, "basic | calibrated | studentized | dh | gk");
  bound->add_option("--gk-c", bnd.gk_c, "weight constant for the gk studentizer");
  bound->add_option("--seed", bnd.seed, "rng seed");

  StudyArgs study;
  auto* study_cmd = app.add_subcommand("study", "run a coverage experiment");
  study_cmd->add_option("--config", study.config_path, "JSON study config")->required();
  study_cmd->add_option("--out-dir", study.out_dir, "directory for coverage.csv / coverage.json");
  study_cmd->add_option("--threads", study.threads, "worker threads (0 = hardware)");
  study_cmd->add_option("--profile", study.profile, "desk | paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  study_cmd->add_flag("--allow-failures", study.allow_failures,
                      "exit 0 even when replications failed");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "compare coverage.csv against reference tables");
  report->add_option("--in", rep.in_path, "coverage CSV produced by `study`")->required();
  report->add_option("--against", rep.against, "table1 | table2 | table3")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3"}));
  report->add_option("--reference", rep.reference, "reference table CSV");
  report->add_option("--tolerance", rep.tolerance, "flag cells further than this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (simulate->parsed()) return run_simulate(sim);
  if (bound->parsed()) return run_bound(bnd);
  if (study_cmd->parsed()) return run_study_cmd(study);
  if (report->parsed()) return run_report(rep);
  return kExitUsage;
}
