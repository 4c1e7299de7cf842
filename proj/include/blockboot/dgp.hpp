#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "blockboot/smooth_model.hpp"

namespace blockboot {

enum class ModelKind { Arch1, Ma1, Ar1 };

const char* model_name(ModelKind kind);
ModelKind model_from_name(std::string_view name);  // "arch1" | "ma1" | "ar1"

using TimeSeries = std::vector<double>;

struct ModelSpec {
  ModelKind kind = ModelKind::Ar1;
  double coefficient = 0.3;
  std::size_t burn_in = 500;
};

// Throws InvalidArgument unless the coefficient admits a stationary process
// (|coef| < 1 for AR1/MA1, coef in [0,1) for the ARCH1 second-moment recursion).
void validate(const ModelSpec& model);

using InnovationStream = std::function<double()>;

// Runs the recursion from zero initial state (X_0 = 0, e_0 = 0), discards the
// first model.burn_in values and returns the next n. Consumes exactly
// burn_in + n innovations; pure in (model, n, stream).
//
//   AR1:   X_i = coef * X_{i-1} + e_i
//   MA1:   X_i = e_i + coef * e_{i-1}
//   ARCH1: X_i = e_i * (1 + coef * X_{i-1}^2)^{1/2}
TimeSeries generate(const ModelSpec& model, std::size_t n, const InnovationStream& innovations);

// Population value of the estimand, used to score coverage.
double true_value(const ModelSpec& model, EstimatorKind target);

}  // namespace blockboot
