#include "blockboot/block_resampler.hpp"

#include <cmath>

#include "blockboot/errors.hpp"

namespace blockboot {

BlockScheme::BlockScheme(MultiSeries series, std::size_t block_length)
    : series_(std::move(series)), ell_(block_length) {
  const std::size_t m = series_.length();
  const std::size_t d = series_.dim;
  if (m == 0 || d == 0) throw InvalidArgument("empty series");
  if (ell_ < 1 || ell_ > m)
    throw InvalidArgument("block length must lie in [1, series length]");
  ncand_ = m - ell_ + 1;
  b_ = m / ell_;

  prefix_.assign((m + 1) * d, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t r = 0; r < d; ++r)
      prefix_[(i + 1) * d + r] = prefix_[i * d + r] + series_.values[i * d + r];

  // E*Xbar* = (1/n') sum_j mean(block j) = (sum of all candidate block sums) / (n' ell).
  std::vector<double> total(d, 0.0);
  for (std::size_t j = 1; j <= ncand_; ++j) {
    const double* hi = prefix_.data() + (j - 1 + ell_) * d;
    const double* lo = prefix_.data() + (j - 1) * d;
    for (std::size_t r = 0; r < d; ++r) total[r] += hi[r] - lo[r];
  }
  center_.resize(d);
  const double denom = static_cast<double>(ncand_) * static_cast<double>(ell_);
  for (std::size_t r = 0; r < d; ++r) center_[r] = total[r] / denom;
}

void BlockScheme::window_sum(std::size_t start, std::size_t len, std::span<double> out) const {
  const std::size_t d = series_.dim;
  const double* hi = prefix_.data() + (start - 1 + len) * d;
  const double* lo = prefix_.data() + (start - 1) * d;
  for (std::size_t r = 0; r < d; ++r) out[r] = hi[r] - lo[r];
}

void draw_into(const BlockScheme& scheme, std::mt19937_64& rng, ResampleDraw& out) {
  out.starts.resize(scheme.blocks_per_resample());
  std::uniform_int_distribution<std::uint32_t> dist(
      1, static_cast<std::uint32_t>(scheme.candidate_count()));
  for (auto& s : out.starts) s = dist(rng);
}

ResampleDraw draw(const BlockScheme& scheme, std::mt19937_64& rng) {
  ResampleDraw out;
  draw_into(scheme, rng, out);
  return out;
}

namespace {

void check_draw(const BlockScheme& scheme, const ResampleDraw& dr) {
  if (dr.starts.size() != scheme.blocks_per_resample())
    throw InvalidArgument("draw size does not match scheme");
  for (auto s : dr.starts)
    if (s < 1 || s > scheme.candidate_count())
      throw InvalidArgument("draw start outside [1, n']");
}

}  // namespace

void resample_mean(const BlockScheme& scheme, const ResampleDraw& dr, std::span<double> out) {
  check_draw(scheme, dr);
  const std::size_t d = scheme.dim();
  for (std::size_t r = 0; r < d; ++r) out[r] = 0.0;
  double sum[8];  // d <= 3 in this project; stack scratch
  for (auto start : dr.starts) {
    scheme.window_sum(start, scheme.block_length(), {sum, d});
    for (std::size_t r = 0; r < d; ++r) out[r] += sum[r];
  }
  const double denom = static_cast<double>(scheme.resample_length());
  for (std::size_t r = 0; r < d; ++r) out[r] /= denom;
}

double pivot(const BlockScheme& scheme, const ResampleDraw& dr, const SmoothEstimator& est) {
  std::vector<double> mean(scheme.dim());
  resample_mean(scheme, dr, mean);
  const double scale = std::sqrt(static_cast<double>(scheme.resample_length()));
  // Evaluated as stat - center_stat so that every path (Monte Carlo,
  // enumeration oracle, nested level) produces bit-identical pivots.
  return scale * est.h(mean) - scale * est.h(scheme.block_mean_center());
}

OuterResult outer_distribution(const BlockScheme& scheme, const SmoothEstimator& est,
                               std::size_t b1, std::mt19937_64& rng) {
  if (b1 < 2) throw InvalidArgument("need at least 2 first-level resamples");
  if (est.dim() != scheme.dim())
    throw InvalidArgument("estimator dimension does not match series");

  const double scale = std::sqrt(static_cast<double>(scheme.resample_length()));
  const double stat_center = scale * est.h(scheme.block_mean_center());

  std::vector<ResampleDraw> draws(b1);
  std::vector<double> stat_raw(b1);
  std::vector<double> pivots(b1);
  std::vector<double> mean(scheme.dim());
  for (std::size_t m = 0; m < b1; ++m) {
    draw_into(scheme, rng, draws[m]);
    resample_mean(scheme, draws[m], mean);
    stat_raw[m] = scale * est.h(mean);
    pivots[m] = stat_raw[m] - stat_center;
  }
  const double tau_hat = sample_sd(stat_raw);
  return OuterResult{EmpiricalDistribution(std::move(pivots)), tau_hat, stat_center,
                     std::move(draws), std::move(stat_raw)};
}

void materialize_into(const BlockScheme& scheme, const ResampleDraw& dr, MultiSeries& out) {
  check_draw(scheme, dr);
  const std::size_t d = scheme.dim();
  const std::size_t ell = scheme.block_length();
  out.dim = d;
  out.values.resize(scheme.resample_length() * d);
  double* dst = out.values.data();
  const double* src_base = scheme.series().values.data();
  for (auto start : dr.starts) {
    const double* src = src_base + (start - 1) * d;
    std::copy(src, src + ell * d, dst);
    dst += ell * d;
  }
}

MultiSeries materialize(const BlockScheme& scheme, const ResampleDraw& dr) {
  MultiSeries out;
  materialize_into(scheme, dr, out);
  return out;
}

}  // namespace blockboot
