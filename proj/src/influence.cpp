#include "oho/influence.hpp"

#include <algorithm>
#include <cmath>

#include "oho/errors.hpp"
#include "oho/optimizer.hpp"

namespace oho {

void MetaConfig::validate() const {
  if (!(eta >= 0.0)) throw ConfigError("eta must be >= 0", "oho.eta");
  if (val_batch_size < 1) throw ConfigError("val_batch_size must be >= 1", "val_batch_size");
  if (reset_interval < 0) throw ConfigError("reset_interval must be >= 0", "oho.reset_interval");
}

OhoState make_oho_state(ParamVector theta0, HyperVector phi0, const GroupingScheme& grouping) {
  validate_hyper(grouping, phi0);
  OhoState state;
  state.gamma = InfluenceMatrix(theta0.size(), grouping.phi_size());
  state.theta = std::move(theta0);
  state.phi = std::move(phi0);
  state.step = 0;
  return state;
}

void immediate_jacobian(const ParamVector& theta, const ParamVector& grad, const HyperVector& phi,
                        const GroupingScheme& grouping, InfluenceMatrix& out) {
  if (!same_layout(theta, grad))
    throw DimensionError("immediate_jacobian: gradient layout mismatch");
  if (phi.size() != grouping.phi_size())
    throw DimensionError("immediate_jacobian: hyperparameter length mismatch");
  if (out.rows != theta.size() || out.cols != phi.size())
    out = InfluenceMatrix(theta.size(), phi.size());
  else
    out.set_zero();

  const auto& segments = theta.layout->segments;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const std::size_t a = grouping.alpha_index[s];
    const std::size_t l = grouping.lambda_index[s];
    const double alpha = phi[a];
    const double two_lambda = 2.0 * phi[l];
    double* alpha_col = out.col(a);
    double* lambda_col = out.col(l);
    const double* t = theta.values.data() + seg.offset;
    const double* g = grad.values.data() + seg.offset;
    for (std::size_t i = 0; i < seg.length; ++i) {
      alpha_col[seg.offset + i] = -(g[i] + two_lambda * t[i]);
      lambda_col[seg.offset + i] = -2.0 * alpha * t[i];
    }
  }
}

void influence_update(OhoState& state, const Model& model, const GroupingScheme& grouping,
                      const Minibatch& train_batch, const ParamVector& grad,
                      const HvpPolicy& policy, const HvpFn* hvp_override) {
  InfluenceMatrix& gamma = state.gamma;
  if (gamma.rows != state.theta.size() || gamma.cols != grouping.phi_size())
    throw DimensionError("influence_update: influence matrix shape mismatch");

  InfluenceMatrix g_mat;
  immediate_jacobian(state.theta, grad, state.phi, grouping, g_mat);

  const auto& segments = state.theta.layout->segments;
  ParamVector column = make_param_vector(state.theta.layout);
  for (std::size_t c = 0; c < gamma.cols; ++c) {
    double* col = gamma.col(c);
    std::copy(col, col + gamma.rows, column.values.begin());

    ParamVector hv = hvp_override ? (*hvp_override)(state.theta, column, train_batch)
                                  : model.hvp(state.theta, column, train_batch, policy);
    if (hv.size() != gamma.rows)
      throw DimensionError("influence_update: Hessian-vector product length mismatch");

    for (std::size_t s = 0; s < segments.size(); ++s) {
      const auto& seg = segments[s];
      const double alpha = state.phi[grouping.alpha_index[s]];
      const double two_alpha_lambda = 2.0 * alpha * state.phi[grouping.lambda_index[s]];
      const double* hvs = hv.values.data() + seg.offset;
      const double* gs = g_mat.col(c) + seg.offset;
      double* cs = col + seg.offset;
      for (std::size_t i = 0; i < seg.length; ++i)
        cs[i] += -alpha * hvs[i] - two_alpha_lambda * cs[i] + gs[i];
    }

    for (std::size_t i = 0; i < gamma.rows; ++i) {
      if (!std::isfinite(col[i]))
        throw NumericalError("influence update produced a non-finite entry in column " +
                                 grouping.phi[c].name() + " at step " +
                                 std::to_string(state.step),
                             state.step, static_cast<std::int64_t>(c));
    }
  }
}

std::vector<double> hypergradient(const InfluenceMatrix& gamma, const ParamVector& val_grad) {
  if (gamma.rows != val_grad.size())
    throw DimensionError("hypergradient: influence rows " + std::to_string(gamma.rows) +
                         " do not match gradient length " + std::to_string(val_grad.size()));
  std::vector<double> hg(gamma.cols, 0.0);
  for (std::size_t c = 0; c < gamma.cols; ++c) {
    const double* col = gamma.col(c);
    double s = 0.0;
    for (std::size_t i = 0; i < gamma.rows; ++i) s += col[i] * val_grad.values[i];
    hg[c] = s;
  }
  return hg;
}

void meta_step(HyperVector& phi, const std::vector<double>& hypergrad, const MetaConfig& config) {
  if (phi.size() != hypergrad.size())
    throw DimensionError("meta_step: hypergradient length mismatch");
  if (config.eta == 0.0) return;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi.values[i] -= config.eta * hypergrad[i];
    if (config.clamp_nonnegative && phi.values[i] < 0.0) phi.values[i] = 0.0;
  }
}

void reset_influence(OhoState& state) { state.gamma.set_zero(); }

StepOutcome oho_train_step(OhoState& state, const Model& model, const GroupingScheme& grouping,
                           const Minibatch& train_batch,
                           const std::function<Minibatch()>& outer_batch, const MetaConfig& config,
                           const HvpPolicy& policy, const HvpFn* hvp_override) {
  config.validate();
  StepOutcome out;
  out.train_grad = make_param_vector(state.theta.layout);
  out.train_loss = model.loss_grad(state.theta, train_batch, out.train_grad);

  // The recursion uses the Hessian at the pre-update parameters, so the
  // influence advances before theta is overwritten.
  influence_update(state, model, grouping, train_batch, out.train_grad, policy, hvp_override);
  sgd_step_inplace(state.theta, out.train_grad, state.phi, grouping);

  const Minibatch vb = outer_batch();
  ParamVector val_grad = make_param_vector(state.theta.layout);
  out.val_loss = model.loss_grad(state.theta, vb, val_grad);

  const std::vector<double> hg = hypergradient(state.gamma, val_grad);
  meta_step(state.phi, hg, config);

  state.step += 1;
  if (config.reset_interval > 0 && state.step % config.reset_interval == 0)
    reset_influence(state);
  return out;
}

}  // namespace oho
