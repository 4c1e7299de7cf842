#include "blockboot/study.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "blockboot/errors.hpp"
#include "blockboot/rng.hpp"
#include "blockboot/version.hpp"

namespace blockboot {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  std::string offending;
  for (const auto& item : obj.items()) {
    if (known.count(item.key()) == 0) {
      if (!offending.empty()) offending += ", ";
      offending += item.key();
    }
  }
  if (!offending.empty())
    throw ConfigError("unknown " + where + " keys: " + offending);
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object()) throw ConfigError("models entries must be objects");
  reject_unknown_keys(j, {"kind", "coefficient", "burn_in"}, "model");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("model entry needs a string 'kind'");
  ModelSpec spec;
  try {
    spec.kind = model_from_name(j["kind"].get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (j.contains("coefficient")) {
    if (!j["coefficient"].is_number()) throw ConfigError("model coefficient must be a number");
    spec.coefficient = j["coefficient"].get<double>();
  }
  if (j.contains("burn_in")) {
    if (!j["burn_in"].is_number_unsigned())
      throw ConfigError("model burn_in must be a nonnegative integer");
    spec.burn_in = j["burn_in"].get<std::size_t>();
  }
  try {
    validate(spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (spec.burn_in < 100) throw ConfigError("model burn_in must be at least 100");
  return spec;
}

}  // namespace

StudyConfig parse_study_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(doc,
                      {"models", "estimators", "alphas", "ns", "replications", "b1", "b2",
                       "block", "master_seed", "methods", "gk_c"},
                      "config");

  StudyConfig cfg;

  if (!doc.contains("models") || !doc["models"].is_array() || doc["models"].empty())
    throw ConfigError("config needs a nonempty 'models' array");
  for (const auto& j : doc["models"]) cfg.models.push_back(parse_model(j));

  if (!doc.contains("estimators") || !doc["estimators"].is_array() || doc["estimators"].empty())
    throw ConfigError("config needs a nonempty 'estimators' array");
  for (const auto& j : doc["estimators"]) {
    if (!j.is_string()) throw ConfigError("estimators entries must be strings");
    try {
      cfg.estimators.push_back(estimator_from_name(j.get<std::string>()));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }

  if (!doc.contains("alphas") || !doc["alphas"].is_array() || doc["alphas"].empty())
    throw ConfigError("config needs a nonempty 'alphas' array");
  for (const auto& j : doc["alphas"]) {
    if (!j.is_number()) throw ConfigError("alphas entries must be numbers");
    const double a = j.get<double>();
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas must lie in (0, 1)");
    cfg.alphas.push_back(a);
  }
  if (cfg.alphas.size() > 12) throw ConfigError("at most 12 alphas supported");

  if (!doc.contains("ns") || !doc["ns"].is_array() || doc["ns"].empty())
    throw ConfigError("config needs a nonempty 'ns' array");
  for (const auto& j : doc["ns"]) {
    if (!j.is_number_unsigned()) throw ConfigError("ns entries must be positive integers");
    cfg.ns.push_back(j.get<std::size_t>());
  }

  if (!doc.contains("replications") || !doc["replications"].is_number_unsigned())
    throw ConfigError("config needs an unsigned 'replications'");
  cfg.replications = doc["replications"].get<std::size_t>();
  if (cfg.replications < 1) throw ConfigError("replications must be at least 1");

  if (doc.contains("b1")) {
    if (!doc["b1"].is_number_unsigned()) throw ConfigError("b1 must be a positive integer");
    cfg.b1 = doc["b1"].get<std::size_t>();
  }
  if (doc.contains("b2")) {
    if (!doc["b2"].is_number_unsigned()) throw ConfigError("b2 must be a positive integer");
    cfg.b2 = doc["b2"].get<std::size_t>();
  }
  if (cfg.b1 < 2 || cfg.b2 < 2) throw ConfigError("b1 and b2 must be at least 2");

  if (doc.contains("block") && !(doc["block"].is_string() && doc["block"] == "auto")) {
    const json& blk = doc["block"];
    if (!blk.is_object()) throw ConfigError("block must be \"auto\" or {\"ell\":..,\"k\":..}");
    reject_unknown_keys(blk, {"ell", "k"}, "block");
    if (!blk.contains("ell") || !blk["ell"].is_number_unsigned() || !blk.contains("k") ||
        !blk["k"].is_number_unsigned())
      throw ConfigError("block needs unsigned 'ell' and 'k'");
    BlockLengths bl{blk["ell"].get<std::size_t>(), blk["k"].get<std::size_t>()};
    if (bl.ell < 1 || bl.k < 1 || bl.k > bl.ell)
      throw ConfigError("block lengths must satisfy 1 <= k <= ell");
    cfg.block = bl;
  }

  if (!doc.contains("master_seed") || !doc["master_seed"].is_number_unsigned())
    throw ConfigError("config needs an unsigned 'master_seed'");
  cfg.master_seed = doc["master_seed"].get<std::uint64_t>();

  if (doc.contains("methods")) {
    if (!doc["methods"].is_array() || doc["methods"].empty())
      throw ConfigError("methods must be a nonempty array");
    unsigned mask = 0;
    for (const auto& j : doc["methods"]) {
      if (!j.is_string()) throw ConfigError("methods entries must be strings");
      try {
        mask |= method_bit(method_from_name(j.get<std::string>()));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    for (std::size_t i = 0; i < kMethodCount; ++i)
      if (mask & (1u << i)) cfg.methods.push_back(static_cast<BoundMethod>(i));
  } else {
    for (std::size_t i = 0; i < kMethodCount; ++i)
      cfg.methods.push_back(static_cast<BoundMethod>(i));
  }

  if (doc.contains("gk_c")) {
    if (!doc["gk_c"].is_number()) throw ConfigError("gk_c must be a number");
    cfg.gk_c = doc["gk_c"].get<double>();
    if (cfg.gk_c < 0.0) throw ConfigError("gk_c must be nonnegative");
  }

  // The auto block rule needs n >= 8; explicit (ell, k) must fit the series.
  for (std::size_t n : cfg.ns) {
    if (!cfg.block && n < 8) throw ConfigError("auto block rule needs every n >= 8");
    if (cfg.block && cfg.block->ell > n) throw ConfigError("block ell exceeds series length");
    if (n < 2) throw ConfigError("ns entries must be at least 2");
  }
  return cfg;
}

void apply_profile(StudyConfig& config, std::string_view profile) {
  if (profile.empty() || profile == "desk") return;
  if (profile == "paper") {
    config.replications = 1000;
    config.b1 = 1000;
    config.b2 = 1000;
    config.ns = {500, 1000};
    return;
  }
  throw InvalidArgument("unknown profile: " + std::string(profile));
}

std::string config_to_json(const StudyConfig& config) {
  json doc;
  doc["models"] = json::array();
  for (const auto& m : config.models)
    doc["models"].push_back({{"kind", model_name(m.kind)},
                             {"coefficient", m.coefficient},
                             {"burn_in", m.burn_in}});
  doc["estimators"] = json::array();
  for (auto e : config.estimators) doc["estimators"].push_back(estimator_name(e));
  doc["alphas"] = config.alphas;
  doc["ns"] = config.ns;
  doc["replications"] = config.replications;
  doc["b1"] = config.b1;
  doc["b2"] = config.b2;
  if (config.block)
    doc["block"] = {{"ell", config.block->ell}, {"k", config.block->k}};
  else
    doc["block"] = "auto";
  doc["master_seed"] = config.master_seed;
  doc["methods"] = json::array();
  for (auto m : config.methods) doc["methods"].push_back(method_name(m));
  doc["gk_c"] = config.gk_c;
  return doc.dump();
}

std::vector<GridPoint> expand_grid(const StudyConfig& config) {
  std::vector<GridPoint> grid;
  for (std::size_t mi = 0; mi < config.models.size(); ++mi)
    for (std::size_t ei = 0; ei < config.estimators.size(); ++ei)
      for (std::size_t ni = 0; ni < config.ns.size(); ++ni) {
        GridPoint gp{mi, ei, ni, 0, 0};
        const BlockLengths bl =
            config.block ? *config.block : default_lengths(config.ns[ni]);
        gp.ell = bl.ell;
        gp.k = bl.k;
        grid.push_back(gp);
      }
  return grid;
}

namespace {

unsigned methods_mask(const StudyConfig& config) {
  unsigned mask = 0;
  for (auto m : config.methods) mask |= method_bit(m);
  return mask;
}

}  // namespace

RepOutcome run_replication(const StudyConfig& config, const GridPoint& grid,
                           std::size_t grid_index, std::size_t rep, BoundWorkspace& ws) {
  const ModelSpec& model = config.models[grid.model_idx];
  const EstimatorKind estimator = config.estimators[grid.estimator_idx];
  const std::size_t n = config.ns[grid.n_idx];

  NormalStream innovations(derive_seed(config.master_seed, {grid_index, rep, 0}));
  const TimeSeries series = generate(model, n, [&] { return innovations(); });

  MultiBoundRequest req;
  req.estimator = estimator;
  req.alphas = config.alphas;
  req.ell = grid.ell;
  req.k = grid.k;
  req.b1 = config.b1;
  req.b2 = config.b2;
  req.gk_c = config.gk_c;
  req.methods = methods_mask(config);

  RepOutcome out;
  std::mt19937_64 rng = make_stream(config.master_seed, {grid_index, rep, 1});
  BoundsResult bounds;
  try {
    bounds = compute_all_bounds(series, req, rng, ws);
  } catch (const NumericError&) {
    // Degenerate sample: every requested method fails for this replication.
    return out;
  }

  const double theta_true = true_value(model, estimator);
  const std::size_t n_alpha = config.alphas.size();
  for (std::size_t mi = 0; mi < kMethodCount; ++mi) {
    const MethodOutcome& mo = bounds.methods[mi];
    if (!mo.requested || !mo.ok) continue;
    out.method_ok[mi] = true;
    for (std::size_t ai = 0; ai < n_alpha; ++ai)
      if (theta_true <= mo.bounds[ai])
        out.cover_bits |= std::uint64_t{1} << (mi * n_alpha + ai);
  }
  return out;
}

double CoverageCell::coverage() const {
  return static_cast<double>(cover_count) / static_cast<double>(r_eff);
}

double CoverageCell::mc_se() const {
  const double p = coverage();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(r_eff));
}

std::size_t CoverageTable::total_failures() const {
  std::size_t total = 0;
  for (const auto& cell : cells) total += cell.failures;
  return total;
}

CoverageTable run_study(const StudyConfig& config, int threads) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<GridPoint> grid = expand_grid(config);
  const std::size_t reps = config.replications;
  const std::size_t tasks = grid.size() * reps;

  std::vector<RepOutcome> outcomes(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    BoundWorkspace ws;
    for (;;) {
      const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= tasks) return;
      const std::size_t gi = task / reps;
      const std::size_t rep = task % reps;
      try {
        outcomes[task] = run_replication(config, grid[gi], gi, rep, ws);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(tasks, std::memory_order_relaxed);
        return;
      }
    }
  };

  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<std::size_t>(n_threads, tasks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Deterministic keyed reduction: task order is grid-major, independent of
  // which worker produced each outcome.
  CoverageTable table;
  table.version = kVersion;
  table.config_json = config_to_json(config);
  const std::size_t n_alpha = config.alphas.size();
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const GridPoint& gp = grid[gi];
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const auto method = config.methods[mi];
      const auto method_idx = static_cast<std::size_t>(method);
      for (std::size_t ai = 0; ai < n_alpha; ++ai) {
        CoverageCell cell;
        cell.model = config.models[gp.model_idx].kind;
        cell.estimator = config.estimators[gp.estimator_idx];
        cell.method = method;
        cell.n = config.ns[gp.n_idx];
        cell.alpha = config.alphas[ai];
        cell.ell = gp.ell;
        cell.k = gp.k;
        for (std::size_t rep = 0; rep < reps; ++rep) {
          const RepOutcome& oc = outcomes[gi * reps + rep];
          if (!oc.method_ok[method_idx]) {
            ++cell.failures;
            continue;
          }
          ++cell.r_eff;
          if (oc.covered(method_idx, ai, n_alpha)) ++cell.cover_count;
        }
        table.cells.push_back(cell);
      }
    }
  }
  table.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

}  // namespace blockboot
