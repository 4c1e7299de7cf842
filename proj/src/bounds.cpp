#include "blockboot/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blockboot/errors.hpp"
#include "blockboot/rng.hpp"

namespace blockboot {

const char* method_name(BoundMethod m) {
  switch (m) {
    case BoundMethod::Basic: return "basic";
    case BoundMethod::Calibrated: return "calibrated";
    case BoundMethod::Studentized: return "studentized";
    case BoundMethod::DavisonHall: return "dh";
    case BoundMethod::GotzeKunsch: return "gk";
  }
  throw InvalidArgument("unknown method");
}

const char* method_display_name(BoundMethod m) {
  switch (m) {
    case BoundMethod::Basic: return "I";
    case BoundMethod::Calibrated: return "I_C";
    case BoundMethod::Studentized: return "I_S";
    case BoundMethod::DavisonHall: return "I_DH";
    case BoundMethod::GotzeKunsch: return "I_GK";
  }
  throw InvalidArgument("unknown method");
}

BoundMethod method_from_name(std::string_view name) {
  if (name == "basic") return BoundMethod::Basic;
  if (name == "calibrated") return BoundMethod::Calibrated;
  if (name == "studentized") return BoundMethod::Studentized;
  if (name == "dh") return BoundMethod::DavisonHall;
  if (name == "gk") return BoundMethod::GotzeKunsch;
  throw InvalidArgument("unknown method: " + std::string(name));
}

BlockLengths default_lengths(std::size_t n) {
  if (n < 8) throw InvalidArgument("default block-length rule needs n >= 8");
  const double root = std::cbrt(static_cast<double>(n));
  const auto ell = static_cast<std::size_t>(std::llround(root));
  return BlockLengths{ell, std::max<std::size_t>(1, ell / 2)};
}

namespace {

// Ceiling order statistic with the level clamped to [1/B, 1]; lets the
// calibrated bound evaluate G* at alpha_hat in the closed interval [0, 1].
double quantile_clamped(const EmpiricalDistribution& dist, double q) {
  return dist.samples()[ceiling_order_index(q, dist.size()) - 1];
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

}  // namespace

double bound_basic(const EmpiricalDistribution& pivots, double theta_hat, std::size_t n,
                   double alpha) {
  check_alpha(alpha);
  if (n == 0) throw InvalidArgument("n must be positive");
  return theta_hat - pivots.quantile(1.0 - alpha) / std::sqrt(static_cast<double>(n));
}

double calibrate(std::span<const double> u_values, double alpha) {
  check_alpha(alpha);
  EmpiricalDistribution dist(std::vector<double>(u_values.begin(), u_values.end()));
  return 1.0 - dist.quantile(1.0 - alpha);
}

CalibratedBound bound_calibrated(const EmpiricalDistribution& outer_pivots,
                                 std::span<const double> u_values, double theta_hat,
                                 std::size_t n, double alpha) {
  const double alpha_hat = calibrate(u_values, alpha);
  const double q = quantile_clamped(outer_pivots, 1.0 - alpha_hat);
  return CalibratedBound{theta_hat - q / std::sqrt(static_cast<double>(n)), alpha_hat};
}

double bound_studentized(const OuterResult& outer, std::span<const double> tau_stars,
                         double theta_hat, std::size_t n, double alpha) {
  check_alpha(alpha);
  if (tau_stars.size() != outer.stat_raw.size())
    throw InvalidArgument("one tau* per first-level draw required");
  std::vector<double> ratios(tau_stars.size());
  for (std::size_t m = 0; m < tau_stars.size(); ++m) {
    if (!(tau_stars[m] > kTauEpsilon))
      throw NumericError("degenerate inner studentizer (tau* below tolerance)");
    ratios[m] = outer.pivot_at(m) / tau_stars[m];
  }
  EmpiricalDistribution j_star(std::move(ratios));
  return theta_hat -
         outer.tau_hat * j_star.quantile(1.0 - alpha) / std::sqrt(static_cast<double>(n));
}

namespace {

// Projects centered observations onto the gradient of H at the series mean:
// w_i = sum_r H_r(Xbar) (X_i - Xbar)^(r). The closed-form variance estimates
// are quadratic forms, so only these scalars are needed.
std::vector<double> gradient_projection(const MultiSeries& series, const SmoothEstimator& est) {
  const std::size_t n = series.length();
  const std::size_t d = series.dim;
  const std::vector<double> mean = series_mean(series);
  std::vector<double> grad(d);
  est.gradient(mean, grad);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = series.values.data() + i * d;
    double acc = 0.0;
    for (std::size_t r = 0; r < d; ++r) acc += grad[r] * (row[r] - mean[r]);
    w[i] = acc;
  }
  return w;
}

double check_tau2(double tau2) {
  if (!(tau2 > kTauEpsilon * kTauEpsilon))
    throw NumericError("non-positive long-run variance estimate");
  return std::sqrt(tau2);
}

}  // namespace

double tau_davison_hall(const MultiSeries& series, std::size_t ell, const SmoothEstimator& est,
                        bool symmetrize) {
  const std::size_t n = series.length();
  if (ell < 1 || ell > n) throw InvalidArgument("block length must lie in [1, series length]");
  if (est.dim() != series.dim) throw InvalidArgument("estimator dimension mismatch");
  const std::vector<double> w = gradient_projection(series, est);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += w[i] * w[i];
  const double lag_factor = symmetrize ? 2.0 : 1.0;
  for (std::size_t j = 1; j < ell; ++j) {
    double lag = 0.0;
    for (std::size_t i = 0; i + j < n; ++i) lag += w[i] * w[i + j];
    total += lag_factor * lag;
  }
  return check_tau2(total / static_cast<double>(n));
}

double tau_gotze_kunsch(const MultiSeries& series, std::size_t ell, const SmoothEstimator& est,
                        double c, bool bootstrap_side) {
  const std::size_t n = series.length();
  if (ell < 1 || ell > n) throw InvalidArgument("block length must lie in [1, series length]");
  if (est.dim() != series.dim) throw InvalidArgument("estimator dimension mismatch");
  if (c < 0.0) throw InvalidArgument("weight constant c must be nonnegative");
  const std::vector<double> w = gradient_projection(series, est);

  if (bootstrap_side) {
    // b^{-1} sum_blocks ell^{-1} (sum of centered values in block)^2.
    if (n % ell != 0)
      throw InvalidArgument("bootstrap-side series length must be a multiple of ell");
    const std::size_t b = n / ell;
    double total = 0.0;
    for (std::size_t blk = 0; blk < b; ++blk) {
      double s = 0.0;
      for (std::size_t i = 0; i < ell; ++i) s += w[blk * ell + i];
      total += s * s;
    }
    return check_tau2(total / static_cast<double>(b * ell));
  }

  // sum_{j=0}^{ell-1} w_j n^{-1} sum_{i=1}^{n-ell} z_i z_{i+j},
  // w_0 = 1 and w_j = 2{1 - c (j/ell)^2}.
  const std::size_t upper = n - ell;  // inner sums run i = 1..n-ell for every lag
  double total = 0.0;
  for (std::size_t j = 0; j < ell; ++j) {
    const double ratio = static_cast<double>(j) / static_cast<double>(ell);
    const double weight = (j == 0) ? 1.0 : 2.0 * (1.0 - c * ratio * ratio);
    double lag = 0.0;
    for (std::size_t i = 0; i < upper; ++i) lag += w[i] * w[i + j];
    total += weight * lag;
  }
  return check_tau2(total / static_cast<double>(n));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool wants(unsigned mask, BoundMethod m) { return (mask & method_bit(m)) != 0; }

void fail_method(MethodOutcome& mo, const std::string& reason) {
  mo.ok = false;
  mo.error = reason;
  mo.bounds.clear();
  mo.alpha_hats.clear();
}

}  // namespace

BoundsResult compute_all_bounds(std::span<const double> series, const MultiBoundRequest& req,
                                std::mt19937_64& rng, BoundWorkspace& ws) {
  if (req.alphas.empty()) throw InvalidArgument("at least one alpha required");
  for (double a : req.alphas) check_alpha(a);
  if (req.b1 < 2) throw InvalidArgument("b1 must be at least 2");
  if ((req.methods & kAllMethods) == 0) throw InvalidArgument("no method requested");

  const SmoothEstimator est(req.estimator);
  MultiSeries transformed = est.transform(series);
  const std::size_t m = transformed.length();

  BoundsResult out;
  out.ell = req.ell > 0 ? req.ell : default_lengths(series.size()).ell;
  out.k = req.k > 0 ? req.k : std::max<std::size_t>(1, out.ell / 2);
  if (out.k > out.ell) throw InvalidArgument("k must not exceed ell");
  if (out.ell > m) throw InvalidArgument("block length exceeds transformed series length");
  out.scale_n = m;
  out.theta_hat = est.h(series_mean(transformed));

  const BlockScheme scheme(std::move(transformed), out.ell);
  const OuterResult outer = outer_distribution(scheme, est, req.b1, rng);
  const std::size_t n_alpha = req.alphas.size();

  for (std::size_t i = 0; i < kMethodCount; ++i)
    out.methods[i].requested = wants(req.methods, static_cast<BoundMethod>(i));

  auto& basic = out.methods[static_cast<std::size_t>(BoundMethod::Basic)];
  auto& cal = out.methods[static_cast<std::size_t>(BoundMethod::Calibrated)];
  auto& stud = out.methods[static_cast<std::size_t>(BoundMethod::Studentized)];
  auto& dh = out.methods[static_cast<std::size_t>(BoundMethod::DavisonHall)];
  auto& gk = out.methods[static_cast<std::size_t>(BoundMethod::GotzeKunsch)];

  if (basic.requested) {
    basic.ok = true;
    basic.tau = outer.tau_hat;
    basic.bounds.resize(n_alpha);
    for (std::size_t a = 0; a < n_alpha; ++a)
      basic.bounds[a] = bound_basic(outer.pivots, out.theta_hat, m, req.alphas[a]);
  }

  if (cal.requested || stud.requested) {
    if (req.b2 < 2) throw InvalidArgument("b2 must be at least 2");
    ws.inner_stats.resize(req.b2);
    ws.u_values.resize(req.b1);
    ws.tau_stars.resize(req.b1);
    std::string inner_error;
    for (std::size_t idx = 0; idx < req.b1; ++idx) {
      const NestedScheme nested(scheme, outer.draws[idx], out.k);
      try {
        const InnerSummary s = inner_summary(nested, est, req.b2, rng, outer.pivot_at(idx),
                                             ws.inner_stats);
        if (!(s.tau_star > kTauEpsilon)) {
          inner_error = "degenerate inner distribution (tau* below tolerance)";
          break;
        }
        ws.u_values[idx] = s.u;
        ws.tau_stars[idx] = s.tau_star;
      } catch (const NumericError& e) {
        inner_error = e.what();
        break;
      }
    }
    if (!inner_error.empty()) {
      if (cal.requested) fail_method(cal, inner_error);
      if (stud.requested) fail_method(stud, inner_error);
    } else {
      if (cal.requested) {
        cal.ok = true;
        cal.tau = outer.tau_hat;
        cal.bounds.resize(n_alpha);
        cal.alpha_hats.resize(n_alpha);
        for (std::size_t a = 0; a < n_alpha; ++a) {
          const CalibratedBound cb =
              bound_calibrated(outer.pivots, ws.u_values, out.theta_hat, m, req.alphas[a]);
          cal.bounds[a] = cb.bound;
          cal.alpha_hats[a] = cb.alpha_hat;
        }
      }
      if (stud.requested) {
        stud.ok = true;
        stud.tau = outer.tau_hat;
        stud.bounds.resize(n_alpha);
        for (std::size_t a = 0; a < n_alpha; ++a)
          stud.bounds[a] =
              bound_studentized(outer, ws.tau_stars, out.theta_hat, m, req.alphas[a]);
      }
    }
  }

  bool dh_pending = dh.requested;
  bool gk_pending = gk.requested;
  if (dh_pending) {
    try {
      dh.tau = tau_davison_hall(scheme.series(), out.ell, est);
    } catch (const NumericError& e) {
      fail_method(dh, e.what());
      dh_pending = false;
    }
  }
  if (gk_pending) {
    try {
      gk.tau = tau_gotze_kunsch(scheme.series(), out.ell, est, req.gk_c, false);
    } catch (const NumericError& e) {
      fail_method(gk, e.what());
      gk_pending = false;
    }
  }

  if (dh_pending || gk_pending) {
    ws.ratios_dh.clear();
    ws.ratios_gk.clear();
    for (std::size_t idx = 0; idx < req.b1; ++idx) {
      materialize_into(scheme, outer.draws[idx], ws.materialized);
      if (dh_pending) {
        try {
          const double tau = tau_davison_hall(ws.materialized, out.ell, est);
          ws.ratios_dh.push_back(outer.pivot_at(idx) / tau);
        } catch (const NumericError&) {
          ++dh.skipped;
        }
      }
      if (gk_pending) {
        try {
          const double tau = tau_gotze_kunsch(ws.materialized, out.ell, est, req.gk_c, true);
          ws.ratios_gk.push_back(outer.pivot_at(idx) / tau);
        } catch (const NumericError&) {
          ++gk.skipped;
        }
      }
    }
    const auto finalize = [&](MethodOutcome& mo, std::vector<double>& ratios) {
      // > 1% non-positive tau*^2 resamples: the replication is reported failed.
      if (static_cast<std::size_t>(mo.skipped) * 100 > req.b1) {
        fail_method(mo, "more than 1% of resamples gave a non-positive studentizer");
        return;
      }
      if (ratios.size() < 2) {
        fail_method(mo, "too few usable studentized resamples");
        return;
      }
      const EmpiricalDistribution j_star(std::vector<double>(ratios.begin(), ratios.end()));
      mo.ok = true;
      mo.bounds.resize(n_alpha);
      for (std::size_t a = 0; a < n_alpha; ++a)
        mo.bounds[a] = out.theta_hat - mo.tau * j_star.quantile(1.0 - req.alphas[a]) /
                                           std::sqrt(static_cast<double>(m));
    };
    if (dh_pending) finalize(dh, ws.ratios_dh);
    if (gk_pending) finalize(gk, ws.ratios_gk);
  }

  for (auto& mo : out.methods) {
    if (!mo.requested || !mo.ok) continue;
    for (double b : mo.bounds) {
      if (!std::isfinite(b)) {
        fail_method(mo, "non-finite bound");
        break;
      }
    }
  }
  return out;
}

BoundSet compute_bounds(const BoundRequest& req, std::uint64_t seed) {
  const double alphas[1] = {req.alpha};
  MultiBoundRequest multi;
  multi.estimator = req.estimator;
  multi.alphas = alphas;
  multi.ell = req.ell;
  multi.k = req.k;
  multi.b1 = req.b1;
  multi.b2 = req.b2;
  multi.gk_c = req.gk_c;
  multi.methods = req.methods;

  std::mt19937_64 rng(make_stream(seed, {}));
  BoundWorkspace ws;
  const BoundsResult res = compute_all_bounds(req.series, multi, rng, ws);

  BoundSet out;
  out.theta_hat = res.theta_hat;
  out.ell = res.ell;
  out.k = res.k;
  out.alpha_hat = kNaN;
  out.tau_hat = kNaN;
  out.tau_dh = kNaN;
  out.tau_gk = kNaN;

  const auto take = [&](BoundMethod method, std::optional<double>& slot) {
    const MethodOutcome& mo = res.outcome(method);
    if (!mo.requested) return;
    if (!mo.ok) {
      if (out.first_error.empty()) out.first_error = mo.error;
      return;
    }
    slot = mo.bounds[0];
  };
  take(BoundMethod::Basic, out.i_basic);
  take(BoundMethod::Calibrated, out.i_cal);
  take(BoundMethod::Studentized, out.i_stud);
  take(BoundMethod::DavisonHall, out.i_dh);
  take(BoundMethod::GotzeKunsch, out.i_gk);

  const MethodOutcome& cal = res.outcome(BoundMethod::Calibrated);
  if (cal.requested && cal.ok) out.alpha_hat = cal.alpha_hats[0];
  const MethodOutcome& basic = res.outcome(BoundMethod::Basic);
  if (basic.requested && basic.ok) out.tau_hat = basic.tau;
  const MethodOutcome& stud = res.outcome(BoundMethod::Studentized);
  if (stud.requested && stud.ok) out.tau_hat = stud.tau;
  const MethodOutcome& dh = res.outcome(BoundMethod::DavisonHall);
  if (dh.requested) {
    out.tau_dh = dh.tau;
    out.degenerate_dh = dh.skipped;
  }
  const MethodOutcome& gk = res.outcome(BoundMethod::GotzeKunsch);
  if (gk.requested) {
    out.tau_gk = gk.tau;
    out.degenerate_gk = gk.skipped;
  }
  return out;
}

double bound_closed_form(BoundMethod kind, std::span<const double> series, std::size_t ell,
                         EstimatorKind estimator, std::size_t b1, double alpha, double gk_c,
                         std::mt19937_64& rng) {
  if (kind != BoundMethod::DavisonHall && kind != BoundMethod::GotzeKunsch)
    throw InvalidArgument("closed-form bound requires dh or gk");
  MultiBoundRequest req;
  const double alphas[1] = {alpha};
  req.estimator = estimator;
  req.alphas = alphas;
  req.ell = ell;
  req.k = std::max<std::size_t>(1, ell / 2);
  req.b1 = b1;
  req.gk_c = gk_c;
  req.methods = method_bit(kind);
  BoundWorkspace ws;
  const BoundsResult res = compute_all_bounds(series, req, rng, ws);
  const MethodOutcome& mo = res.outcome(kind);
  if (!mo.ok) throw NumericError(mo.error);
  return mo.bounds[0];
}

}  // namespace blockboot
