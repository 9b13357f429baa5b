#ifndef OHO_NETWORK_HPP
#define OHO_NETWORK_HPP

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "oho/matrix.hpp"
#include "oho/rng.hpp"

namespace oho {

enum class ParamKind { weight, bias };

// One contiguous slice of the flat parameter vector.
struct ParamSegment {
  int layer = 0;
  ParamKind kind = ParamKind::weight;
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Segments are contiguous, non-overlapping and cover [0, total) exactly.
struct ParamLayout {
  std::vector<ParamSegment> segments;
  std::size_t total = 0;

  bool operator==(const ParamLayout& other) const;
};

using LayoutPtr = std::shared_ptr<const ParamLayout>;

// Flat parameter vector plus the layout describing its layer/kind structure.
struct ParamVector {
  std::vector<double> values;
  LayoutPtr layout;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double norm_inf() const;
  double norm2() const;
  bool all_finite() const;
};

double dot(const ParamVector& a, const ParamVector& b);

// Structural layout agreement (not pointer identity).
bool same_layout(const ParamVector& a, const ParamVector& b);

ParamVector zeros_like(const ParamVector& p);
ParamVector make_param_vector(LayoutPtr layout);

// Fully-connected classifier: ReLU hidden layers, linear logits,
// softmax cross-entropy loss.
struct NetworkSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output

  int input_dim() const { return layer_sizes.front(); }
  int n_classes() const { return layer_sizes.back(); }
  int n_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

  // Throws ConfigError if fewer than 2 layer sizes or any size < 1.
  void validate() const;
};

// Weight and bias segment per layer, in layer order: W0, b0, W1, b1, ...
LayoutPtr make_mlp_layout(const std::vector<int>& layer_sizes);

// He-style uniform fan-in initialization for weights, zero biases.
ParamVector init_params(const NetworkSpec& spec, Rng& rng);

struct Minibatch {
  DenseMatrix inputs;       // batch x input_dim
  std::vector<int> labels;  // class ids in [0, n_classes)

  std::size_t size() const { return labels.size(); }
};

// Batch-mean softmax cross-entropy. Throws DimensionError on shape mismatch,
// NumericalError if the result is not finite.
double forward_loss(const NetworkSpec& spec, const ParamVector& theta, const Minibatch& batch);

// Returns the loss (identical value to forward_loss) and fills `grad`, which
// must share theta's layout (it is resized/assigned if empty).
double loss_grad(const NetworkSpec& spec, const ParamVector& theta, const Minibatch& batch,
                 ParamVector& grad);

}  // namespace oho

#endif  // OHO_NETWORK_HPP
