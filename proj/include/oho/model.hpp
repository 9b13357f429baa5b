#ifndef OHO_MODEL_HPP
#define OHO_MODEL_HPP

#include <vector>

#include "oho/hvp.hpp"
#include "oho/network.hpp"

namespace oho {

// Differentiable training loss seen by the optimizer loops: a loss, its
// gradient, and a Hessian-vector product. The default HVP is the
// central-difference approximation through loss_grad.
class Model {
 public:
  virtual ~Model() = default;

  virtual LayoutPtr layout() const = 0;
  virtual double loss(const ParamVector& theta, const Minibatch& batch) const = 0;
  virtual double loss_grad(const ParamVector& theta, const Minibatch& batch,
                           ParamVector& grad) const = 0;
  virtual ParamVector hvp(const ParamVector& theta, const ParamVector& v, const Minibatch& batch,
                          const HvpPolicy& policy) const;
};

// The fully-connected classifier of network.hpp.
class MlpModel : public Model {
 public:
  explicit MlpModel(NetworkSpec spec);

  LayoutPtr layout() const override { return layout_; }
  const NetworkSpec& spec() const { return spec_; }
  double loss(const ParamVector& theta, const Minibatch& batch) const override;
  double loss_grad(const ParamVector& theta, const Minibatch& batch,
                   ParamVector& grad) const override;

 private:
  NetworkSpec spec_;
  LayoutPtr layout_;
};

// L = 1/2 * sum_i a_i theta_i^2, independent of the data. Gradient and HVP are
// analytic, which makes this the reference model for exactness checks and
// contraction-regime diagnostics.
class QuadraticModel : public Model {
 public:
  // Default layout: one weight segment covering the whole vector.
  explicit QuadraticModel(std::vector<double> curvature_diag);
  QuadraticModel(std::vector<double> curvature_diag, LayoutPtr layout);

  LayoutPtr layout() const override { return layout_; }
  const std::vector<double>& curvature() const { return curvature_; }
  double loss(const ParamVector& theta, const Minibatch& batch) const override;
  double loss_grad(const ParamVector& theta, const Minibatch& batch,
                   ParamVector& grad) const override;
  ParamVector hvp(const ParamVector& theta, const ParamVector& v, const Minibatch& batch,
                  const HvpPolicy& policy) const override;

 private:
  std::vector<double> curvature_;
  LayoutPtr layout_;
};

}  // namespace oho

#endif  // OHO_MODEL_HPP
