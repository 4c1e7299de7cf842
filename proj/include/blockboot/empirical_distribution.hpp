#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace blockboot {

// Sorted Monte Carlo sample with the ceiling order-statistic quantile and the
// weak-inequality CDF. One convention for every bootstrap distribution in the
// project; immutable after construction.
class EmpiricalDistribution {
 public:
  // Sorts; requires at least 2 finite values.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const { return samples_.size(); }
  std::span<const double> samples() const { return samples_; }

  // Order statistic x_(r) with r = ceil(q * B), q in (0,1), clamped to [1, B].
  double quantile(double q) const;

  // Fraction of samples <= x.
  double cdf(double x) const;

 private:
  std::vector<double> samples_;
};

// Sample standard deviation (divide by n-1); 0 for fewer than 2 values.
double sample_sd(std::span<const double> values);

// Ceiling order-statistic index r = ceil(q*b) clamped to [1, b]. Targets within
// a relative 1e-9 of an integer snap to it, which keeps the quantile/CDF Galois
// adjunction exact: cdf returns j/b, and (j/b)*b must index the j-th statistic
// even when the product rounds just above j.
std::size_t ceiling_order_index(double q, std::size_t b);

}  // namespace blockboot
