#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "blockboot/nested_resampler.hpp"

namespace blockboot {

enum class BoundMethod { Basic = 0, Calibrated, Studentized, DavisonHall, GotzeKunsch };

inline constexpr std::size_t kMethodCount = 5;
constexpr unsigned method_bit(BoundMethod m) { return 1u << static_cast<unsigned>(m); }
inline constexpr unsigned kAllMethods = 0x1f;

const char* method_name(BoundMethod m);          // "basic" | "calibrated" | ...
const char* method_display_name(BoundMethod m);  // "I" | "I_C" | "I_S" | "I_DH" | "I_GK"
BoundMethod method_from_name(std::string_view name);

struct BlockLengths {
  std::size_t ell = 0;
  std::size_t k = 0;
};

// ell = round(n^{1/3}) to nearest (ties up), k = max(1, floor(ell/2)).
// Reproduces (8,4) at n=500 and (10,5) at n=1000. Requires n >= 8.
BlockLengths default_lengths(std::size_t n);

// I(alpha) = theta_hat - n^{-1/2} G*^{-1}(1 - alpha).
double bound_basic(const EmpiricalDistribution& pivots, double theta_hat, std::size_t n,
                   double alpha);

// alpha_hat = 1 - quantile(u-values, 1 - alpha): satisfies the calibration
// equation P*(T* <= G**^{-1}(1 - alpha_hat)) = 1 - alpha to within 1/B1.
double calibrate(std::span<const double> u_values, double alpha);

struct CalibratedBound {
  double bound = 0.0;
  double alpha_hat = 0.0;
};

// I_C(alpha) = I(alpha_hat). alpha_hat may reach 0 or 1 at the empirical
// boundary; the G* order statistic is then clamped to the extreme sample.
CalibratedBound bound_calibrated(const EmpiricalDistribution& outer_pivots,
                                 std::span<const double> u_values, double theta_hat,
                                 std::size_t n, double alpha);

// I_S(alpha) = theta_hat - n^{-1/2} tau_hat J*^{-1}(1 - alpha), with J* the
// empirical law of T*_m / tau*_m. Throws when any tau*_m <= kTauEpsilon.
double bound_studentized(const OuterResult& outer, std::span<const double> tau_stars,
                         double theta_hat, std::size_t n, double alpha);

// Davison-Hall closed-form studentizer, with the one-sided lag sum as printed:
//   Sigma_rs = n^{-1} sum_i z_i^r z_i^s + n^{-1} sum_{j=1}^{ell-1} sum_{i=1}^{n-j} z_i^r z_{i+j}^s
//   tau^2 = sum_rs H_r(Xbar) H_s(Xbar) Sigma_rs
// `symmetrize` adds the transposed lag term (doubling it under the quadratic
// form). Throws NumericError when tau^2 <= kTauEpsilon^2.
double tau_davison_hall(const MultiSeries& series, std::size_t ell, const SmoothEstimator& est,
                        bool symmetrize = false);

// Gotze-Kunsch studentizer. Original side: lag-window estimate with weights
// w_0 = 1, w_j = 2{1 - c (j/ell)^2}, inner sums over i = 1..n-ell. Bootstrap
// side: between-block sum of squared centered block sums on a materialized
// bootstrap series (length must be a multiple of ell).
double tau_gotze_kunsch(const MultiSeries& series, std::size_t ell, const SmoothEstimator& est,
                        double c, bool bootstrap_side);

// --- combined engine -------------------------------------------------------

// Reusable per-worker scratch; the hot loops allocate nothing once warm.
struct BoundWorkspace {
  std::vector<double> inner_stats;
  std::vector<double> u_values;
  std::vector<double> tau_stars;
  std::vector<double> ratios_dh;
  std::vector<double> ratios_gk;
  std::vector<double> mean;
  MultiSeries materialized;
};

struct MethodOutcome {
  bool requested = false;
  bool ok = false;
  std::string error;               // failure reason when requested && !ok
  std::vector<double> bounds;      // per alpha
  std::vector<double> alpha_hats;  // calibrated only, per alpha
  double tau = 0.0;                // method studentizer (tau_hat / tau_DH / tau_GK)
  long skipped = 0;                // dh/gk resamples dropped for non-positive tau*^2
};

struct BoundsResult {
  double theta_hat = 0.0;
  std::size_t ell = 0;
  std::size_t k = 0;
  std::size_t scale_n = 0;  // transformed series length used in n^{-1/2}
  std::array<MethodOutcome, kMethodCount> methods;

  const MethodOutcome& outcome(BoundMethod m) const {
    return methods[static_cast<std::size_t>(m)];
  }
};

struct MultiBoundRequest {
  EstimatorKind estimator = EstimatorKind::Mean;
  std::span<const double> alphas;
  std::size_t ell = 0;  // 0 = auto (round(n^{1/3}) on the raw length)
  std::size_t k = 0;    // 0 = auto (ell/2)
  std::size_t b1 = 500;
  std::size_t b2 = 250;
  double gk_c = 0.5;
  unsigned methods = kAllMethods;
};

// Computes every requested bound at every alpha from one shared set of
// first-level draws. Per-method degeneracies are recorded in the outcome;
// degeneracy of the sample itself (H undefined at the outer level) throws.
BoundsResult compute_all_bounds(std::span<const double> series, const MultiBoundRequest& req,
                                std::mt19937_64& rng, BoundWorkspace& ws);

// --- single-alpha convenience (CLI / C API surface) -------------------------

struct BoundRequest {
  std::span<const double> series;
  EstimatorKind estimator = EstimatorKind::Mean;
  double alpha = 0.05;
  std::size_t ell = 0;
  std::size_t k = 0;
  std::size_t b1 = 1000;
  std::size_t b2 = 1000;
  double gk_c = 0.5;
  unsigned methods = kAllMethods;
};

struct BoundSet {
  double theta_hat = 0.0;
  std::size_t ell = 0;
  std::size_t k = 0;
  std::optional<double> i_basic, i_cal, i_stud, i_dh, i_gk;
  double alpha_hat = 0.0;  // meaningful only when i_cal is set
  double tau_hat = 0.0;
  double tau_dh = 0.0;
  double tau_gk = 0.0;
  long degenerate_dh = 0;
  long degenerate_gk = 0;
  std::string first_error;  // empty when every requested method succeeded
};

BoundSet compute_bounds(const BoundRequest& req, std::uint64_t seed);

// Closed-form reference bound (kind = DavisonHall or GotzeKunsch), drawing its
// own B1 resamples. Throws NumericError if the method degenerates.
double bound_closed_form(BoundMethod kind, std::span<const double> series, std::size_t ell,
                         EstimatorKind estimator, std::size_t b1, double alpha, double gk_c,
                         std::mt19937_64& rng);

}  // namespace blockboot
