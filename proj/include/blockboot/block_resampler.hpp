#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "blockboot/empirical_distribution.hpp"
#include "blockboot/smooth_model.hpp"

namespace blockboot {

// Geometry and O(1) aggregation for the overlapping blocks of a d-variate
// series: block length ell, n' = m - ell + 1 candidate blocks, b = floor(m/ell)
// blocks per resample. A prefix-sum table makes any window sum O(d), so
// resamples are never materialized on the hot path.
class BlockScheme {
 public:
  BlockScheme(MultiSeries series, std::size_t block_length);

  const MultiSeries& series() const { return series_; }
  std::size_t series_length() const { return series_.length(); }
  std::size_t dim() const { return series_.dim; }
  std::size_t block_length() const { return ell_; }
  std::size_t candidate_count() const { return ncand_; }        // n'
  std::size_t blocks_per_resample() const { return b_; }        // b
  std::size_t resample_length() const { return b_ * ell_; }     // b*ell <= m

  // Sum of the length-`len` window starting at 1-indexed `start`.
  void window_sum(std::size_t start, std::size_t len, std::span<double> out) const;
  void block_sum(std::size_t start, std::span<double> out) const { window_sum(start, ell_, out); }

  // E*Xbar*: the average of all n' candidate block means (edge-effect center).
  std::span<const double> block_mean_center() const { return center_; }

 private:
  MultiSeries series_;
  std::size_t ell_ = 0;
  std::size_t ncand_ = 0;
  std::size_t b_ = 0;
  std::vector<double> prefix_;  // (m+1) x d cumulative sums
  std::vector<double> center_;
};

// One first-level resample: b block start positions, 1-indexed, i.i.d. uniform
// on {1, ..., n'}.
struct ResampleDraw {
  std::vector<std::uint32_t> starts;
};

void draw_into(const BlockScheme& scheme, std::mt19937_64& rng, ResampleDraw& out);
ResampleDraw draw(const BlockScheme& scheme, std::mt19937_64& rng);

// Xbar* = (sum of drawn block sums) / (b*ell), via the prefix table.
void resample_mean(const BlockScheme& scheme, const ResampleDraw& dr, std::span<double> out);

// T* = (b*ell)^{1/2} H(Xbar*) - (b*ell)^{1/2} H(E*Xbar*).
double pivot(const BlockScheme& scheme, const ResampleDraw& dr, const SmoothEstimator& est);

struct OuterResult {
  EmpiricalDistribution pivots;     // sorted T* values
  double tau_hat = 0.0;             // sample sd of (b*ell)^{1/2} H(Xbar*)
  double stat_center = 0.0;         // (b*ell)^{1/2} H(E*Xbar*)
  std::vector<ResampleDraw> draws;  // generation order, kept for nesting
  std::vector<double> stat_raw;     // (b*ell)^{1/2} H(Xbar*), generation order

  double pivot_at(std::size_t m) const { return stat_raw[m] - stat_center; }
};

OuterResult outer_distribution(const BlockScheme& scheme, const SmoothEstimator& est,
                               std::size_t b1, std::mt19937_64& rng);

// Concatenated bootstrap series; needed only by the closed-form studentizers.
void materialize_into(const BlockScheme& scheme, const ResampleDraw& dr, MultiSeries& out);
MultiSeries materialize(const BlockScheme& scheme, const ResampleDraw& dr);

}  // namespace blockboot
