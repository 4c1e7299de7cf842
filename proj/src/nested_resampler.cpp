#include "blockboot/nested_resampler.hpp"

#include <algorithm>
#include <cmath>

#include "blockboot/errors.hpp"

namespace blockboot {

NestedScheme::NestedScheme(const BlockScheme& outer, const ResampleDraw& outer_draw,
                           std::size_t k)
    : k_(k), d_(outer.dim()) {
  const std::size_t ell = outer.block_length();
  if (k_ < 1 || k_ > ell) throw InvalidArgument("inner block length must lie in [1, ell]");
  if (outer_draw.starts.size() != outer.blocks_per_resample())
    throw InvalidArgument("draw size does not match scheme");
  lprime_ = ell - k_ + 1;
  c_ = outer.series_length() / k_;

  starts_.reserve(outer_draw.starts.size() * lprime_);
  for (auto parent : outer_draw.starts)
    for (std::size_t j = 0; j < lprime_; ++j)
      starts_.push_back(parent + static_cast<std::uint32_t>(j));

  sums_.resize(starts_.size() * d_);
  center_.assign(d_, 0.0);
  for (std::size_t idx = 0; idx < starts_.size(); ++idx) {
    outer.window_sum(starts_[idx], k_, {sums_.data() + idx * d_, d_});
    for (std::size_t r = 0; r < d_; ++r) center_[r] += sums_[idx * d_ + r];
  }
  const double denom = static_cast<double>(starts_.size()) * static_cast<double>(k_);
  for (std::size_t r = 0; r < d_; ++r) center_[r] /= denom;
}

void sample_inner_stats(const NestedScheme& nested, const SmoothEstimator& est,
                        std::mt19937_64& rng, std::span<double> out) {
  const std::size_t c = nested.blocks_per_resample();
  const std::size_t d = nested.dim();
  const double scale = std::sqrt(static_cast<double>(nested.resample_length()));
  std::uniform_int_distribution<std::uint32_t> dist(
      0, static_cast<std::uint32_t>(nested.candidate_count() - 1));

  const double* sums = nested.candidate_sum(0).data();
  const double denom = static_cast<double>(nested.resample_length());
  double acc[8];
  double mean[8];
  for (double& stat : out) {
    for (std::size_t r = 0; r < d; ++r) acc[r] = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
      const std::uint32_t idx = dist(rng);
      const double* s = sums + static_cast<std::size_t>(idx) * d;
      for (std::size_t r = 0; r < d; ++r) acc[r] += s[r];
    }
    for (std::size_t r = 0; r < d; ++r) mean[r] = acc[r] / denom;
    stat = scale * est.h({mean, d});
  }
}

namespace {

// Pivots (stat - center_stat), tau* and the u-count are derived from the stat
// buffer identically in both the full and fast paths.
double center_stat(const NestedScheme& nested, const SmoothEstimator& est) {
  const double scale = std::sqrt(static_cast<double>(nested.resample_length()));
  return scale * est.h(nested.inner_center());
}

}  // namespace

InnerResult inner_distribution(const NestedScheme& nested, const SmoothEstimator& est,
                               std::size_t b2, std::mt19937_64& rng) {
  if (b2 < 2) throw InvalidArgument("need at least 2 second-level resamples");
  std::vector<double> stats(b2);
  sample_inner_stats(nested, est, rng, stats);
  const double shift = center_stat(nested, est);
  for (double& s : stats) s -= shift;
  const double tau_star = sample_sd(stats);
  if (!(tau_star > kTauEpsilon))
    throw NumericError("degenerate inner distribution (tau* below tolerance)");
  return InnerResult{EmpiricalDistribution(std::move(stats)), tau_star};
}

double u_value(const InnerResult& inner, double t_star) { return inner.pivots.cdf(t_star); }

InnerSummary inner_summary(const NestedScheme& nested, const SmoothEstimator& est,
                           std::size_t b2, std::mt19937_64& rng, double t_star,
                           std::span<double> stat_scratch) {
  if (b2 < 2) throw InvalidArgument("need at least 2 second-level resamples");
  if (stat_scratch.size() < b2) throw InvalidArgument("stat scratch too small");
  auto stats = stat_scratch.subspan(0, b2);
  sample_inner_stats(nested, est, rng, stats);
  const double shift = center_stat(nested, est);
  std::size_t below = 0;
  for (double& s : stats) {
    s -= shift;
    if (s <= t_star) ++below;
  }
  InnerSummary out;
  out.u = static_cast<double>(below) / static_cast<double>(b2);
  out.tau_star = sample_sd(stats);
  return out;
}

}  // namespace blockboot
