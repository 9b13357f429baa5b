#include "oho/hvp.hpp"

#include <cmath>

#include "oho/errors.hpp"

namespace oho {

ParamVector finite_difference_hvp(const GradFn& grad_fn, const ParamVector& theta,
                                  const ParamVector& v, const HvpPolicy& policy) {
  if (!same_layout(theta, v)) throw DimensionError("hvp: direction layout does not match theta");
  const double vnorm = v.norm2();
  if (vnorm == 0.0) return zeros_like(theta);

  const double eps = policy.scale * (1.0 + theta.norm_inf()) / std::max(vnorm, policy.min_vnorm);

  ParamVector shifted = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) shifted.values[i] += eps * v.values[i];
  ParamVector g_plus = make_param_vector(theta.layout);
  grad_fn(shifted, g_plus);

  for (std::size_t i = 0; i < theta.size(); ++i)
    shifted.values[i] = theta.values[i] - eps * v.values[i];
  ParamVector g_minus = make_param_vector(theta.layout);
  grad_fn(shifted, g_minus);

  ParamVector out = make_param_vector(theta.layout);
  const double inv = 1.0 / (2.0 * eps);
  for (std::size_t i = 0; i < theta.size(); ++i)
    out.values[i] = (g_plus.values[i] - g_minus.values[i]) * inv;
  if (!out.all_finite())
    throw NumericalError("finite-difference Hessian-vector product is not finite");
  return out;
}

ParamVector hvp(const NetworkSpec& spec, const ParamVector& theta, const ParamVector& v,
                const Minibatch& batch, const HvpPolicy& policy) {
  GradFn grad_fn = [&spec, &batch](const ParamVector& p, ParamVector& g) {
    return loss_grad(spec, p, batch, g);
  };
  return finite_difference_hvp(grad_fn, theta, v, policy);
}

}  // namespace oho
