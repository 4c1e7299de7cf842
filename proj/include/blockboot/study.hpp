#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockboot/bounds.hpp"
#include "blockboot/dgp.hpp"

namespace blockboot {

struct StudyConfig {
  std::vector<ModelSpec> models;
  std::vector<EstimatorKind> estimators;
  std::vector<double> alphas;
  std::vector<std::size_t> ns;
  std::size_t replications = 1;
  std::size_t b1 = 500;
  std::size_t b2 = 250;
  std::optional<BlockLengths> block;  // nullopt = auto rule per n
  std::uint64_t master_seed = 0;
  std::vector<BoundMethod> methods;   // canonical order, deduplicated
  double gk_c = 0.5;
};

// Parses and validates the JSON document (snake_case keys mirroring the
// fields); unknown keys are rejected with the offending names listed.
StudyConfig parse_study_config(const std::string& json_text);

// "desk": leaves the config untouched. "paper": pins replications = 1000,
// b1 = b2 = 1000, ns = {500, 1000}.
void apply_profile(StudyConfig& config, std::string_view profile);

std::string config_to_json(const StudyConfig& config);

struct GridPoint {
  std::size_t model_idx = 0;
  std::size_t estimator_idx = 0;
  std::size_t n_idx = 0;
  std::size_t ell = 0;
  std::size_t k = 0;
};

std::vector<GridPoint> expand_grid(const StudyConfig& config);

// Outcome of one replication: per requested method, whether it completed and
// the cover indicator {theta_true <= bound} per alpha.
struct RepOutcome {
  std::array<bool, kMethodCount> method_ok{};
  std::uint64_t cover_bits = 0;

  bool covered(std::size_t method_idx, std::size_t alpha_idx, std::size_t alpha_count) const {
    return (cover_bits >> (method_idx * alpha_count + alpha_idx)) & 1u;
  }
};

// Seeds dedicated streams from (master_seed, grid, rep, phase), generates the
// series and computes all requested bounds. Deterministic in its arguments.
RepOutcome run_replication(const StudyConfig& config, const GridPoint& grid,
                           std::size_t grid_index, std::size_t rep, BoundWorkspace& ws);

struct CoverageCell {
  ModelKind model{};
  EstimatorKind estimator{};
  BoundMethod method{};
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t ell = 0;
  std::size_t k = 0;
  std::size_t cover_count = 0;
  std::size_t r_eff = 0;
  std::size_t failures = 0;

  double coverage() const;
  double mc_se() const;  // sqrt(coverage (1-coverage) / r_eff)
};

struct CoverageTable {
  std::vector<CoverageCell> cells;
  std::string config_json;  // normalized config echo
  std::string version;
  double wall_seconds = 0.0;

  std::size_t total_failures() const;
};

// Runs the full grid x replications experiment. threads <= 0 picks the
// hardware count. Output is a pure function of the config, independent of
// worker count and scheduling.
CoverageTable run_study(const StudyConfig& config, int threads);

std::string render_csv(const CoverageTable& table);
std::string render_json(const CoverageTable& table);
std::string render_pretty(const CoverageTable& table);

}  // namespace blockboot
