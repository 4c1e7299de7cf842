#include "blockboot/empirical_distribution.hpp"

#include <algorithm>
#include <cmath>

#include "blockboot/errors.hpp"

namespace blockboot {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2)
    throw InvalidArgument("empirical distribution needs at least 2 samples");
  for (double v : samples_)
    if (!std::isfinite(v)) throw NumericError("non-finite sample in empirical distribution");
  std::sort(samples_.begin(), samples_.end());
}

std::size_t ceiling_order_index(double q, std::size_t b) {
  const double target = q * static_cast<double>(b);
  const double nearest = std::round(target);
  double r;
  if (std::abs(target - nearest) <= 1e-9 * std::max(1.0, std::abs(target)))
    r = nearest;
  else
    r = std::ceil(target);
  if (r < 1.0) r = 1.0;
  if (r > static_cast<double>(b)) r = static_cast<double>(b);
  return static_cast<std::size_t>(r);
}

double EmpiricalDistribution::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
  return samples_[ceiling_order_index(q, samples_.size()) - 1];
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace blockboot
