#include "oho/optimizer.hpp"

#include <cmath>

#include "oho/errors.hpp"

namespace oho {

void sgd_step_inplace(ParamVector& theta, const ParamVector& grad, const HyperVector& phi,
                      const GroupingScheme& grouping) {
  if (!same_layout(theta, grad)) throw DimensionError("sgd_step: gradient layout mismatch");
  if (phi.size() != grouping.phi_size())
    throw DimensionError("sgd_step: hyperparameter length mismatch");
  const auto& segments = theta.layout->segments;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const double alpha = phi[grouping.alpha_index[s]];
    const double two_lambda = 2.0 * phi[grouping.lambda_index[s]];
    double* t = theta.values.data() + seg.offset;
    const double* g = grad.values.data() + seg.offset;
    for (std::size_t i = 0; i < seg.length; ++i) t[i] -= alpha * (g[i] + two_lambda * t[i]);
  }
}

ParamVector sgd_step(const ParamVector& theta, const ParamVector& grad, const HyperVector& phi,
                     const GroupingScheme& grouping) {
  ParamVector out = theta;
  sgd_step_inplace(out, grad, phi, grouping);
  return out;
}

void SchedulerSpec::validate() const {
  if (!(base_lr > 0.0)) throw ConfigError("base_lr must be > 0", "scheduler.base_lr");
  switch (kind) {
    case SchedulerKind::fixed:
      break;
    case SchedulerKind::step:
      if (step_size < 1) throw ConfigError("step_size must be >= 1", "scheduler.step_size");
      [[fallthrough]];
    case SchedulerKind::exp:
      if (!(decay > 0.0 && decay <= 1.0))
        throw ConfigError("decay must be in (0, 1]", "scheduler.decay");
      break;
    case SchedulerKind::cosine:
      if (horizon < 1) throw ConfigError("horizon must be >= 1 for cosine", "scheduler.horizon");
      break;
  }
}

double scheduler_lr(const SchedulerSpec& spec, std::int64_t step) {
  spec.validate();
  switch (spec.kind) {
    case SchedulerKind::fixed:
      return spec.base_lr;
    case SchedulerKind::step:
      return spec.base_lr * std::pow(spec.decay, static_cast<double>(step / spec.step_size));
    case SchedulerKind::exp:
      return spec.base_lr * std::pow(spec.decay, static_cast<double>(step));
    case SchedulerKind::cosine: {
      const double phase = 3.14159265358979323846 * static_cast<double>(step) /
                           static_cast<double>(spec.horizon);
      return 0.5 * spec.base_lr * (1.0 + std::cos(phase));
    }
  }
  return spec.base_lr;
}

}  // namespace oho
