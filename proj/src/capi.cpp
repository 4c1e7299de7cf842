#include "blockboot.h"

#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "blockboot/bounds.hpp"
#include "blockboot/dgp.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/rng.hpp"
#include "blockboot/study.hpp"
#include "blockboot/version.hpp"

namespace {

thread_local std::string g_last_error;

bb_status set_error(bb_status status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

template <typename Fn>
bb_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const blockboot::InvalidArgument& e) {
    return set_error(BB_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const blockboot::NumericError& e) {
    return set_error(BB_ERROR_NUMERIC, e.what());
  } catch (const blockboot::ConfigError& e) {
    return set_error(BB_ERROR_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BB_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BB_ERROR_INTERNAL, e.what());
  } catch (...) {
    return set_error(BB_ERROR_INTERNAL, "unknown error");
  }
}

char* copy_text(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

struct bb_study {
  blockboot::StudyConfig config;
  std::optional<blockboot::CoverageTable> table;
};

extern "C" {

const char* bb_version(void) { return blockboot::kVersion; }

const char* bb_status_name(bb_status status) {
  switch (status) {
    case BB_OK: return "ok";
    case BB_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case BB_ERROR_NUMERIC: return "numeric failure";
    case BB_ERROR_CONFIG: return "config schema violation";
    case BB_ERROR_IO: return "i/o error";
    case BB_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bb_last_error(void) { return g_last_error.c_str(); }

void bb_free_text(char* text) { delete[] text; }

bb_status bb_default_lengths(long n, long* out_ell, long* out_k) {
  return guarded([&]() -> bb_status {
    if (n < 0 || out_ell == nullptr || out_k == nullptr)
      throw blockboot::InvalidArgument("bad arguments");
    const auto bl = blockboot::default_lengths(static_cast<std::size_t>(n));
    *out_ell = static_cast<long>(bl.ell);
    *out_k = static_cast<long>(bl.k);
    return BB_OK;
  });
}

bb_status bb_simulate(const char* model, double coefficient, long burn_in, long n,
                      uint64_t seed, double* out_values) {
  return guarded([&]() -> bb_status {
    if (model == nullptr || out_values == nullptr || n < 2 || burn_in < 0)
      throw blockboot::InvalidArgument(
          n < 2 ? "series length must be at least 2" : "bad arguments");
    blockboot::ModelSpec spec;
    spec.kind = blockboot::model_from_name(model);
    spec.coefficient = coefficient;
    spec.burn_in = static_cast<std::size_t>(burn_in);
    blockboot::NormalStream innovations(seed);
    const blockboot::TimeSeries series =
        blockboot::generate(spec, static_cast<std::size_t>(n), [&] { return innovations(); });
    std::memcpy(out_values, series.data(), series.size() * sizeof(double));
    return BB_OK;
  });
}

bb_status bb_bound(const double* series, long n, const bb_bound_options* options,
                   bb_bound_report* out) {
  return guarded([&]() -> bb_status {
    if (series == nullptr || options == nullptr || out == nullptr || n < 2 ||
        options->estimator == nullptr || options->method == nullptr)
      throw blockboot::InvalidArgument("bad arguments");

    const auto method = blockboot::method_from_name(options->method);
    blockboot::BoundRequest req;
    req.series = {series, static_cast<std::size_t>(n)};
    req.estimator = blockboot::estimator_from_name(options->estimator);
    req.alpha = options->alpha;
    req.ell = options->ell > 0 ? static_cast<std::size_t>(options->ell) : 0;
    req.k = options->k > 0 ? static_cast<std::size_t>(options->k) : 0;
    if (options->b1 < 2) throw blockboot::InvalidArgument("b1 must be at least 2");
    req.b1 = static_cast<std::size_t>(options->b1);
    req.b2 = options->b2 >= 2 ? static_cast<std::size_t>(options->b2) : 2;
    req.gk_c = options->gk_c;
    req.methods = blockboot::method_bit(method);

    const blockboot::BoundSet set = blockboot::compute_bounds(req, options->seed);
    if (!set.first_error.empty()) throw blockboot::NumericError(set.first_error);

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    out->theta_hat = set.theta_hat;
    out->alpha_hat = nan;
    out->tau = nan;
    out->ell = static_cast<long>(set.ell);
    out->k = static_cast<long>(set.k);
    out->degenerate_resamples = 0;
    switch (method) {
      case blockboot::BoundMethod::Basic:
        out->bound = *set.i_basic;
        break;
      case blockboot::BoundMethod::Calibrated:
        out->bound = *set.i_cal;
        out->alpha_hat = set.alpha_hat;
        break;
      case blockboot::BoundMethod::Studentized:
        out->bound = *set.i_stud;
        out->tau = set.tau_hat;
        break;
      case blockboot::BoundMethod::DavisonHall:
        out->bound = *set.i_dh;
        out->tau = set.tau_dh;
        out->degenerate_resamples = set.degenerate_dh;
        break;
      case blockboot::BoundMethod::GotzeKunsch:
        out->bound = *set.i_gk;
        out->tau = set.tau_gk;
        out->degenerate_resamples = set.degenerate_gk;
        break;
    }
    return BB_OK;
  });
}

bb_status bb_study_create(const char* config_json, const char* profile, bb_study** out) {
  return guarded([&]() -> bb_status {
    if (config_json == nullptr || out == nullptr)
      throw blockboot::InvalidArgument("bad arguments");
    auto study = std::make_unique<bb_study>();
    study->config = blockboot::parse_study_config(config_json);
    if (profile != nullptr) blockboot::apply_profile(study->config, profile);
    *out = study.release();
    return BB_OK;
  });
}

bb_status bb_study_run(bb_study* study, int threads) {
  return guarded([&]() -> bb_status {
    if (study == nullptr) throw blockboot::InvalidArgument("null study");
    study->table = blockboot::run_study(study->config, threads);
    return BB_OK;
  });
}

bb_status bb_study_render(const bb_study* study, const char* format, char** out_text) {
  return guarded([&]() -> bb_status {
    if (study == nullptr || format == nullptr || out_text == nullptr)
      throw blockboot::InvalidArgument("bad arguments");
    if (!study->table) throw blockboot::InvalidArgument("study has not been run");
    const std::string fmt = format;
    std::string text;
    if (fmt == "csv")
      text = blockboot::render_csv(*study->table);
    else if (fmt == "json")
      text = blockboot::render_json(*study->table);
    else if (fmt == "pretty")
      text = blockboot::render_pretty(*study->table);
    else
      throw blockboot::InvalidArgument("unknown format: " + fmt);
    *out_text = copy_text(text);
    return BB_OK;
  });
}

bb_status bb_study_total_failures(const bb_study* study, long* out) {
  return guarded([&]() -> bb_status {
    if (study == nullptr || out == nullptr) throw blockboot::InvalidArgument("bad arguments");
    if (!study->table) throw blockboot::InvalidArgument("study has not been run");
    *out = static_cast<long>(study->table->total_failures());
    return BB_OK;
  });
}

void bb_study_destroy(bb_study* study) { delete study; }

}  // extern "C"
