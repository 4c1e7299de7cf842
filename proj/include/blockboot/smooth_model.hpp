#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace blockboot {

enum class EstimatorKind { Mean, Variance, Lag1Autocorrelation };

const char* estimator_name(EstimatorKind kind);
EstimatorKind estimator_from_name(std::string_view name);  // "mean" | "variance" | "lag1"

// d-variate series stored row-major: values[i * dim + r].
struct MultiSeries {
  std::size_t dim = 1;
  std::vector<double> values;

  std::size_t length() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

// Places an estimator in the smooth function model: theta = H(mean of a
// d-variate transformed series), with analytic gradient.
//
//   Mean:     d=1, Y_i = X_i,                 H(x) = x
//   Variance: d=2, Y_i = (X_i, X_i^2),        H(m) = m2 - m1^2
//   Lag1:     d=3, Y_i = (X_i, X_i^2, X_i X_{i+1}) over i=1..n-1,
//             H(m) = (m3 - m1^2) / (m2 - m1^2)
class SmoothEstimator {
 public:
  explicit SmoothEstimator(EstimatorKind kind) : kind_(kind) {}

  EstimatorKind kind() const { return kind_; }
  std::size_t dim() const;
  std::size_t min_series_length() const;

  MultiSeries transform(std::span<const double> series) const;

  // Throws NumericError when H is undefined at `point` (degenerate sample).
  double h(std::span<const double> point) const;
  void gradient(std::span<const double> point, std::span<double> out) const;

 private:
  EstimatorKind kind_;
};

SmoothEstimator make_estimator(EstimatorKind kind);

// Componentwise mean.
std::vector<double> series_mean(const MultiSeries& series);

// H(mean of transform(series)).
double plug_in(std::span<const double> series, const SmoothEstimator& est);

}  // namespace blockboot
