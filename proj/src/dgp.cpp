#include "blockboot/dgp.hpp"

#include <cmath>
#include <string>

#include "blockboot/errors.hpp"

namespace blockboot {

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Arch1: return "arch1";
    case ModelKind::Ma1: return "ma1";
    case ModelKind::Ar1: return "ar1";
  }
  throw InvalidArgument("unknown model kind");
}

ModelKind model_from_name(std::string_view name) {
  if (name == "arch1") return ModelKind::Arch1;
  if (name == "ma1") return ModelKind::Ma1;
  if (name == "ar1") return ModelKind::Ar1;
  throw InvalidArgument("unknown model: " + std::string(name));
}

void validate(const ModelSpec& model) {
  switch (model.kind) {
    case ModelKind::Ar1:
    case ModelKind::Ma1:
      if (!(std::abs(model.coefficient) < 1.0))
        throw InvalidArgument("coefficient must satisfy |coef| < 1");
      return;
    case ModelKind::Arch1:
      if (!(model.coefficient >= 0.0 && model.coefficient < 1.0))
        throw InvalidArgument("arch1 coefficient must lie in [0, 1)");
      return;
  }
  throw InvalidArgument("unknown model kind");
}

TimeSeries generate(const ModelSpec& model, std::size_t n, const InnovationStream& innovations) {
  if (n < 2) throw InvalidArgument("series length must be at least 2");
  validate(model);
  const double coef = model.coefficient;
  const std::size_t total = model.burn_in + n;

  TimeSeries out;
  out.reserve(n);
  double x_prev = 0.0;
  double e_prev = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double e = innovations();
    double x = 0.0;
    switch (model.kind) {
      case ModelKind::Ar1: x = coef * x_prev + e; break;
      case ModelKind::Ma1: x = e + coef * e_prev; break;
      case ModelKind::Arch1: x = e * std::sqrt(1.0 + coef * x_prev * x_prev); break;
    }
    if (!std::isfinite(x)) throw NumericError("non-finite value in simulated series");
    x_prev = x;
    e_prev = e;
    if (i >= model.burn_in) out.push_back(x);
  }
  return out;
}

double true_value(const ModelSpec& model, EstimatorKind target) {
  validate(model);
  const double coef = model.coefficient;
  switch (target) {
    case EstimatorKind::Mean:
      return 0.0;  // zero-mean innovations, symmetric recursions
    case EstimatorKind::Variance:
      switch (model.kind) {
        case ModelKind::Ar1: return 1.0 / (1.0 - coef * coef);
        case ModelKind::Ma1: return 1.0 + coef * coef;
        case ModelKind::Arch1: return 1.0 / (1.0 - coef);  // fixed point v = 1 + coef*v
      }
      break;
    case EstimatorKind::Lag1Autocorrelation:
      switch (model.kind) {
        case ModelKind::Ar1: return coef;
        case ModelKind::Ma1: return coef / (1.0 + coef * coef);
        case ModelKind::Arch1: return 0.0;  // uncorrelated though dependent
      }
      break;
  }
  throw InvalidArgument("unknown estimator kind");
}

}  // namespace blockboot
