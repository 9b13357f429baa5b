#ifndef OHO_HVP_HPP
#define OHO_HVP_HPP

#include <functional>

#include "oho/network.hpp"

namespace oho {

// Step rule for the central-difference Hessian-vector product:
//   eps = scale * (1 + |theta|_inf) / max(|v|_2, min_vnorm)
// Scale-invariant in both theta and v; exact on quadratics up to rounding.
struct HvpPolicy {
  double scale = 1e-4;
  double min_vnorm = 1e-12;
};

// Gradient oracle: fills grad at the given parameters, returns the loss.
using GradFn = std::function<double(const ParamVector&, ParamVector&)>;

// Central-difference H*v through any gradient oracle. A zero direction
// returns the zero vector. Throws NumericalError on non-finite output.
ParamVector finite_difference_hvp(const GradFn& grad_fn, const ParamVector& theta,
                                  const ParamVector& v, const HvpPolicy& policy = {});

// H*v for the network loss on one minibatch.
ParamVector hvp(const NetworkSpec& spec, const ParamVector& theta, const ParamVector& v,
                const Minibatch& batch, const HvpPolicy& policy = {});

}  // namespace oho

#endif  // OHO_HVP_HPP
