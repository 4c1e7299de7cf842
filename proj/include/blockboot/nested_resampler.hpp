#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "blockboot/block_resampler.hpp"

namespace blockboot {

// Standard deviations at or below this are treated as degenerate.
inline constexpr double kTauEpsilon = 1e-12;

// Second-level geometry: length-k windows inside each sampled first-level
// block, addressed by start positions into the ORIGINAL series. Inner blocks
// therefore never run across pasting joints, and all sums come from the outer
// scheme's prefix table. Candidate block sums are precomputed once.
class NestedScheme {
 public:
  NestedScheme(const BlockScheme& outer, const ResampleDraw& outer_draw, std::size_t k);

  std::size_t dim() const { return d_; }
  std::size_t inner_block_length() const { return k_; }           // k
  std::size_t inner_blocks_per_parent() const { return lprime_; } // ell' = ell - k + 1
  std::size_t blocks_per_resample() const { return c_; }          // c = floor(m/k)
  std::size_t resample_length() const { return c_ * k_; }
  std::size_t candidate_count() const { return starts_.size(); }  // b * ell'

  // 1-indexed start positions {N_i + j - 1 : 1<=i<=b, 1<=j<=ell'}, parent-major.
  std::span<const std::uint32_t> candidate_starts() const { return starts_; }
  std::span<const double> candidate_sum(std::size_t idx) const {
    return {sums_.data() + idx * d_, d_};
  }

  // E**Xbar**: average of all candidate block means.
  std::span<const double> inner_center() const { return center_; }

 private:
  std::size_t k_ = 0;
  std::size_t lprime_ = 0;
  std::size_t c_ = 0;
  std::size_t d_ = 0;
  std::vector<std::uint32_t> starts_;
  std::vector<double> sums_;  // candidate_count x d
  std::vector<double> center_;
};

// One uniform candidate index (0-based into candidate_starts). All inner
// resampling, production and tests alike, goes through this.
inline std::uint32_t draw_candidate_index(const NestedScheme& nested, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> dist(
      0, static_cast<std::uint32_t>(nested.candidate_count() - 1));
  return dist(rng);
}

// Fills out[i] = (c*k)^{1/2} H(Xbar**_i) for independent inner resamples of c
// candidate blocks each.
void sample_inner_stats(const NestedScheme& nested, const SmoothEstimator& est,
                        std::mt19937_64& rng, std::span<double> out);

struct InnerResult {
  EmpiricalDistribution pivots;  // sorted T** values
  double tau_star = 0.0;         // sample sd of the inner pivots
};

// Throws NumericError when tau_star <= kTauEpsilon or H is undefined.
InnerResult inner_distribution(const NestedScheme& nested, const SmoothEstimator& est,
                               std::size_t b2, std::mt19937_64& rng);

// Inner CDF evaluated at the outer pivot; feeds coverage calibration.
double u_value(const InnerResult& inner, double t_star);

// Calibration fast path: same draws and arithmetic as inner_distribution, but
// only the u-value and tau* are produced. Degeneracy is reported through the
// returned tau_star rather than by throwing. `stat_scratch` must hold b2 values.
struct InnerSummary {
  double u = 0.0;
  double tau_star = 0.0;
};
InnerSummary inner_summary(const NestedScheme& nested, const SmoothEstimator& est,
                           std::size_t b2, std::mt19937_64& rng, double t_star,
                           std::span<double> stat_scratch);

}  // namespace blockboot
