#include "oho/model.hpp"

#include "oho/errors.hpp"

namespace oho {

ParamVector Model::hvp(const ParamVector& theta, const ParamVector& v, const Minibatch& batch,
                       const HvpPolicy& policy) const {
  GradFn grad_fn = [this, &batch](const ParamVector& p, ParamVector& g) {
    return this->loss_grad(p, batch, g);
  };
  return finite_difference_hvp(grad_fn, theta, v, policy);
}

MlpModel::MlpModel(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  layout_ = make_mlp_layout(spec_.layer_sizes);
}

double MlpModel::loss(const ParamVector& theta, const Minibatch& batch) const {
  return forward_loss(spec_, theta, batch);
}

double MlpModel::loss_grad(const ParamVector& theta, const Minibatch& batch,
                           ParamVector& grad) const {
  return oho::loss_grad(spec_, theta, batch, grad);
}

namespace {
LayoutPtr flat_layout(std::size_t n) {
  auto layout = std::make_shared<ParamLayout>();
  layout->segments.push_back({0, ParamKind::weight, 0, n});
  layout->total = n;
  return layout;
}
}  // namespace

QuadraticModel::QuadraticModel(std::vector<double> curvature_diag)
    : QuadraticModel(std::move(curvature_diag), nullptr) {
  layout_ = flat_layout(curvature_.size());
}

QuadraticModel::QuadraticModel(std::vector<double> curvature_diag, LayoutPtr layout)
    : curvature_(std::move(curvature_diag)), layout_(std::move(layout)) {
  if (layout_ && layout_->total != curvature_.size())
    throw DimensionError("quadratic model: layout size does not match curvature diagonal");
}

double QuadraticModel::loss(const ParamVector& theta, const Minibatch&) const {
  if (theta.size() != curvature_.size())
    throw DimensionError("quadratic model: theta length does not match curvature diagonal");
  double s = 0.0;
  for (std::size_t i = 0; i < curvature_.size(); ++i)
    s += curvature_[i] * theta.values[i] * theta.values[i];
  return 0.5 * s;
}

double QuadraticModel::loss_grad(const ParamVector& theta, const Minibatch& batch,
                                 ParamVector& grad) const {
  if (grad.values.empty() && !grad.layout) grad.layout = theta.layout;
  grad.values.assign(theta.size(), 0.0);
  for (std::size_t i = 0; i < curvature_.size(); ++i)
    grad.values[i] = curvature_[i] * theta.values[i];
  return loss(theta, batch);
}

ParamVector QuadraticModel::hvp(const ParamVector& theta, const ParamVector& v, const Minibatch&,
                                const HvpPolicy&) const {
  if (v.size() != curvature_.size())
    throw DimensionError("quadratic model: direction length does not match curvature diagonal");
  ParamVector out = zeros_like(theta);
  for (std::size_t i = 0; i < curvature_.size(); ++i) out.values[i] = curvature_[i] * v.values[i];
  return out;
}

}  // namespace oho
