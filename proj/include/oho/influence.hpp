#ifndef OHO_INFLUENCE_HPP
#define OHO_INFLUENCE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "oho/grouping.hpp"
#include "oho/model.hpp"

namespace oho {

// Accumulated sensitivity of the parameters to each hyperparameter:
// a dense |theta| x |phi| matrix, stored column-major so each
// hyperparameter's column can be fed to a Hessian-vector product directly.
struct InfluenceMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  InfluenceMatrix() = default;
  InfluenceMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* col(std::size_t c) { return data.data() + c * rows; }
  const double* col(std::size_t c) const { return data.data() + c * rows; }
  double& at(std::size_t r, std::size_t c) { return data[c * rows + r]; }
  double at(std::size_t r, std::size_t c) const { return data[c * rows + r]; }

  void set_zero() { std::fill(data.begin(), data.end(), 0.0); }
};

enum class OuterData { validation, training };

struct MetaConfig {
  double eta = 0.0;                 // meta learning rate; 0 disables the meta update
  std::size_t val_batch_size = 100;
  std::int64_t reset_interval = 0;  // clear the influence every N steps; 0 = never
  OuterData outer_data = OuterData::validation;
  bool clamp_nonnegative = true;

  void validate() const;
};

struct OhoState {
  ParamVector theta;
  HyperVector phi;
  InfluenceMatrix gamma;
  std::int64_t step = 0;
};

OhoState make_oho_state(ParamVector theta0, HyperVector phi0, const GroupingScheme& grouping);

// Replaces the model's Hessian-vector product inside the influence update
// (e.g. with an exact or dense-Hessian oracle).
using HvpFn =
    std::function<ParamVector(const ParamVector& theta, const ParamVector& v, const Minibatch&)>;

// One-step sensitivity of the SGD update to each hyperparameter, evaluated at
// the pre-update parameters with the current training-batch gradient:
//   alpha column: -(grad_i + 2 lambda_g theta_i) on the column's (kind, group)
//   lambda column: -2 alpha_k(i) theta_i on the column's group
// and zero elsewhere.
void immediate_jacobian(const ParamVector& theta, const ParamVector& grad, const HyperVector& phi,
                        const GroupingScheme& grouping, InfluenceMatrix& out);

// The influence recursion. `state.theta` must still hold the pre-update
// parameters and `grad` the training gradient at them; each column costs one
// Hessian-vector product on the same training batch:
//   col' = col - alpha.(H col) - 2 alpha.lambda.col + G-col
// Throws NumericalError (with step and column) if a column turns non-finite.
void influence_update(OhoState& state, const Model& model, const GroupingScheme& grouping,
                      const Minibatch& train_batch, const ParamVector& grad,
                      const HvpPolicy& policy = {}, const HvpFn* hvp_override = nullptr);

// Gamma^T * val_grad, the validation-loss gradient with respect to phi.
std::vector<double> hypergradient(const InfluenceMatrix& gamma, const ParamVector& val_grad);

// phi' = phi - eta * hypergrad, clamped to >= 0 when configured. A zero eta
// leaves phi untouched.
void meta_step(HyperVector& phi, const std::vector<double>& hypergrad, const MetaConfig& config);

void reset_influence(OhoState& state);

struct StepOutcome {
  double train_loss = 0.0;
  double val_loss = 0.0;
  ParamVector train_grad;  // gradient at the pre-update parameters
};

// One joint parameter + hyperparameter step: training gradient, influence
// recursion, SGD step, outer-batch gradient at the new parameters,
// hypergradient and meta update, then the optional periodic influence reset.
StepOutcome oho_train_step(OhoState& state, const Model& model, const GroupingScheme& grouping,
                           const Minibatch& train_batch,
                           const std::function<Minibatch()>& outer_batch, const MetaConfig& config,
                           const HvpPolicy& policy = {}, const HvpFn* hvp_override = nullptr);

}  // namespace oho

#endif  // OHO_INFLUENCE_HPP
