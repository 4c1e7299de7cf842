#include "blockboot/smooth_model.hpp"

#include <string>

#include "blockboot/errors.hpp"

namespace blockboot {

const char* estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::Mean: return "mean";
    case EstimatorKind::Variance: return "variance";
    case EstimatorKind::Lag1Autocorrelation: return "lag1";
  }
  throw InvalidArgument("unknown estimator kind");
}

EstimatorKind estimator_from_name(std::string_view name) {
  if (name == "mean") return EstimatorKind::Mean;
  if (name == "variance") return EstimatorKind::Variance;
  if (name == "lag1") return EstimatorKind::Lag1Autocorrelation;
  throw InvalidArgument("unknown estimator: " + std::string(name));
}

std::size_t SmoothEstimator::dim() const {
  switch (kind_) {
    case EstimatorKind::Mean: return 1;
    case EstimatorKind::Variance: return 2;
    case EstimatorKind::Lag1Autocorrelation: return 3;
  }
  throw InvalidArgument("unknown estimator kind");
}

std::size_t SmoothEstimator::min_series_length() const {
  return kind_ == EstimatorKind::Lag1Autocorrelation ? 3 : 2;
}

MultiSeries SmoothEstimator::transform(std::span<const double> series) const {
  if (series.size() < min_series_length()) throw InvalidArgument("series too short");
  MultiSeries out;
  out.dim = dim();
  switch (kind_) {
    case EstimatorKind::Mean:
      out.values.assign(series.begin(), series.end());
      break;
    case EstimatorKind::Variance:
      out.values.reserve(2 * series.size());
      for (double x : series) {
        out.values.push_back(x);
        out.values.push_back(x * x);
      }
      break;
    case EstimatorKind::Lag1Autocorrelation:
      // Y_i = (X_i, X_i^2, X_i X_{i+1}), transformed length n-1.
      out.values.reserve(3 * (series.size() - 1));
      for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        out.values.push_back(series[i]);
        out.values.push_back(series[i] * series[i]);
        out.values.push_back(series[i] * series[i + 1]);
      }
      break;
  }
  return out;
}

double SmoothEstimator::h(std::span<const double> point) const {
  switch (kind_) {
    case EstimatorKind::Mean:
      return point[0];
    case EstimatorKind::Variance:
      return point[1] - point[0] * point[0];
    case EstimatorKind::Lag1Autocorrelation: {
      const double d = point[1] - point[0] * point[0];
      if (!(d > 0.0)) throw NumericError("degenerate sample: zero variance in lag-1 transform");
      return (point[2] - point[0] * point[0]) / d;
    }
  }
  throw InvalidArgument("unknown estimator kind");
}

void SmoothEstimator::gradient(std::span<const double> point, std::span<double> out) const {
  switch (kind_) {
    case EstimatorKind::Mean:
      out[0] = 1.0;
      return;
    case EstimatorKind::Variance:
      out[0] = -2.0 * point[0];
      out[1] = 1.0;
      return;
    case EstimatorKind::Lag1Autocorrelation: {
      const double d = point[1] - point[0] * point[0];
      if (!(d > 0.0)) throw NumericError("degenerate sample: zero variance in lag-1 transform");
      const double d2 = d * d;
      out[0] = 2.0 * point[0] * (point[2] - point[1]) / d2;
      out[1] = -(point[2] - point[0] * point[0]) / d2;
      out[2] = 1.0 / d;
      return;
    }
  }
  throw InvalidArgument("unknown estimator kind");
}

SmoothEstimator make_estimator(EstimatorKind kind) { return SmoothEstimator(kind); }

std::vector<double> series_mean(const MultiSeries& series) {
  const std::size_t len = series.length();
  if (len == 0) throw InvalidArgument("empty series");
  std::vector<double> mean(series.dim, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    const double* row = series.values.data() + i * series.dim;
    for (std::size_t r = 0; r < series.dim; ++r) mean[r] += row[r];
  }
  for (double& v : mean) v /= static_cast<double>(len);
  return mean;
}

double plug_in(std::span<const double> series, const SmoothEstimator& est) {
  const MultiSeries transformed = est.transform(series);
  return est.h(series_mean(transformed));
}

}  // namespace blockboot
