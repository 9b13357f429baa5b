#ifndef OHO_OPTIMIZER_HPP
#define OHO_OPTIMIZER_HPP

#include <cstdint>

#include "oho/grouping.hpp"

namespace oho {

// One SGD step with per-group learning rates and coupled L2 decay:
//   theta'_i = theta_i - alpha_k(i) * (grad_i + 2 * lambda_g(i) * theta_i)
// where alpha follows the segment's kind (weight/bias) and group.
ParamVector sgd_step(const ParamVector& theta, const ParamVector& grad, const HyperVector& phi,
                     const GroupingScheme& grouping);

void sgd_step_inplace(ParamVector& theta, const ParamVector& grad, const HyperVector& phi,
                      const GroupingScheme& grouping);

enum class SchedulerKind { fixed, step, exp, cosine };

struct SchedulerSpec {
  SchedulerKind kind = SchedulerKind::fixed;
  double base_lr = 0.1;
  int step_size = 1;     // step kind: steps between decays
  double decay = 1.0;    // step/exp kinds
  int horizon = 0;       // cosine kind: steps to reach zero

  void validate() const;
};

// Learning rate at a given 0-based step count.
double scheduler_lr(const SchedulerSpec& spec, std::int64_t step);

}  // namespace oho

#endif  // OHO_OPTIMIZER_HPP
