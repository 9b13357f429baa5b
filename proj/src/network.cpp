#include "oho/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "oho/errors.hpp"

namespace oho {

bool ParamLayout::operator==(const ParamLayout& other) const {
  if (total != other.total || segments.size() != other.segments.size()) return false;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& a = segments[i];
    const auto& b = other.segments[i];
    if (a.layer != b.layer || a.kind != b.kind || a.offset != b.offset || a.length != b.length)
      return false;
  }
  return true;
}

double ParamVector::norm_inf() const {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::fabs(x));
  return m;
}

double ParamVector::norm2() const {
  double s = 0.0;
  for (double x : values) s += x * x;
  return std::sqrt(s);
}

bool ParamVector::all_finite() const {
  for (double x : values)
    if (!std::isfinite(x)) return false;
  return true;
}

double dot(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot: parameter vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
  return s;
}

bool same_layout(const ParamVector& a, const ParamVector& b) {
  if (a.layout == b.layout) return a.values.size() == b.values.size();
  if (!a.layout || !b.layout) return false;
  return *a.layout == *b.layout && a.values.size() == a.layout->total &&
         b.values.size() == b.layout->total;
}

ParamVector zeros_like(const ParamVector& p) {
  return ParamVector{std::vector<double>(p.size(), 0.0), p.layout};
}

ParamVector make_param_vector(LayoutPtr layout) {
  std::size_t n = layout ? layout->total : 0;
  return ParamVector{std::vector<double>(n, 0.0), std::move(layout)};
}

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 2)
    throw ConfigError("needs at least input and output sizes", "network.layer_sizes");
  for (int s : layer_sizes)
    if (s < 1) throw ConfigError("layer sizes must be positive", "network.layer_sizes");
}

LayoutPtr make_mlp_layout(const std::vector<int>& layer_sizes) {
  auto layout = std::make_shared<ParamLayout>();
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    const auto n_in = static_cast<std::size_t>(layer_sizes[l]);
    const auto n_out = static_cast<std::size_t>(layer_sizes[l + 1]);
    layout->segments.push_back({static_cast<int>(l), ParamKind::weight, offset, n_in * n_out});
    offset += n_in * n_out;
    layout->segments.push_back({static_cast<int>(l), ParamKind::bias, offset, n_out});
    offset += n_out;
  }
  layout->total = offset;
  return layout;
}

ParamVector init_params(const NetworkSpec& spec, Rng& rng) {
  spec.validate();
  ParamVector theta = make_param_vector(make_mlp_layout(spec.layer_sizes));
  for (const auto& seg : theta.layout->segments) {
    if (seg.kind != ParamKind::weight) continue;  // biases stay zero
    const double fan_in = static_cast<double>(spec.layer_sizes[seg.layer]);
    const double bound = std::sqrt(6.0 / fan_in);
    for (std::size_t i = 0; i < seg.length; ++i)
      theta.values[seg.offset + i] = rng.uniform(-bound, bound);
  }
  return theta;
}

namespace {

void check_inputs(const NetworkSpec& spec, const ParamVector& theta, const Minibatch& batch) {
  spec.validate();
  auto expected = make_mlp_layout(spec.layer_sizes);
  if (!theta.layout || !(*theta.layout == *expected) || theta.size() != expected->total)
    throw DimensionError("parameter vector layout does not match network spec");
  if (batch.labels.empty()) throw DimensionError("minibatch is empty");
  if (batch.inputs.rows != batch.labels.size())
    throw DimensionError("minibatch inputs/labels row counts disagree: " +
                         std::to_string(batch.inputs.rows) + " vs " +
                         std::to_string(batch.labels.size()));
  if (batch.inputs.cols != static_cast<std::size_t>(spec.input_dim()))
    throw DimensionError("minibatch input dimension " + std::to_string(batch.inputs.cols) +
                         " does not match network input " + std::to_string(spec.input_dim()));
  const int classes = spec.n_classes();
  for (int y : batch.labels)
    if (y < 0 || y >= classes)
      throw DimensionError("label " + std::to_string(y) + " outside [0, " +
                           std::to_string(classes) + ")");
}

struct ForwardPass {
  // activations[0] is the input; activations[l+1] holds layer l output
  // (post-ReLU for hidden layers, raw logits for the last layer).
  std::vector<DenseMatrix> activations;
  double loss = 0.0;
};

// x @ W + b for one layer; W is n_in x n_out row-major inside theta.
void affine(const DenseMatrix& x, const double* w, const double* b, std::size_t n_in,
            std::size_t n_out, DenseMatrix& out) {
  out = DenseMatrix(x.rows, n_out);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* xrow = x.row(i);
    double* orow = out.row(i);
    std::memcpy(orow, b, n_out * sizeof(double));
    for (std::size_t k = 0; k < n_in; ++k) {
      const double xv = xrow[k];
      if (xv == 0.0) continue;
      const double* wrow = w + k * n_out;
      for (std::size_t j = 0; j < n_out; ++j) orow[j] += xv * wrow[j];
    }
  }
}

ForwardPass forward_pass(const NetworkSpec& spec, const ParamVector& theta,
                         const Minibatch& batch) {
  check_inputs(spec, theta, batch);
  const int layers = spec.n_layers();
  ForwardPass fp;
  fp.activations.resize(static_cast<std::size_t>(layers) + 1);
  fp.activations[0] = batch.inputs;
  for (int l = 0; l < layers; ++l) {
    const auto& wseg = theta.layout->segments[2 * static_cast<std::size_t>(l)];
    const auto& bseg = theta.layout->segments[2 * static_cast<std::size_t>(l) + 1];
    const auto n_in = static_cast<std::size_t>(spec.layer_sizes[l]);
    const auto n_out = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
    affine(fp.activations[l], theta.values.data() + wseg.offset,
           theta.values.data() + bseg.offset, n_in, n_out, fp.activations[l + 1]);
    if (l + 1 < layers) {
      for (double& v : fp.activations[l + 1].data) v = v > 0.0 ? v : 0.0;
    }
  }

  // Batch-mean softmax cross-entropy via log-sum-exp.
  const DenseMatrix& logits = fp.activations.back();
  const auto classes = static_cast<std::size_t>(spec.n_classes());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.rows; ++i) {
    const double* z = logits.row(i);
    double m = z[0];
    for (std::size_t c = 1; c < classes; ++c) m = std::max(m, z[c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum += std::exp(z[c] - m);
    total += m + std::log(sum) - z[static_cast<std::size_t>(batch.labels[i])];
  }
  fp.loss = total / static_cast<double>(logits.rows);
  if (!std::isfinite(fp.loss)) throw NumericalError("forward pass produced non-finite loss");
  return fp;
}

}  // namespace

double forward_loss(const NetworkSpec& spec, const ParamVector& theta, const Minibatch& batch) {
  return forward_pass(spec, theta, batch).loss;
}

double loss_grad(const NetworkSpec& spec, const ParamVector& theta, const Minibatch& batch,
                 ParamVector& grad) {
  ForwardPass fp = forward_pass(spec, theta, batch);
  if (grad.values.empty() && !grad.layout) grad.layout = theta.layout;
  if (!grad.layout || !(*grad.layout == *theta.layout))
    throw DimensionError("gradient layout does not match parameters");
  grad.values.assign(theta.size(), 0.0);

  const int layers = spec.n_layers();
  const auto batch_n = static_cast<std::size_t>(batch.labels.size());
  const auto classes = static_cast<std::size_t>(spec.n_classes());

  // dZ for the output layer: (softmax - onehot) / batch.
  DenseMatrix dz(batch_n, classes);
  {
    const DenseMatrix& logits = fp.activations.back();
    const double inv_b = 1.0 / static_cast<double>(batch_n);
    for (std::size_t i = 0; i < batch_n; ++i) {
      const double* z = logits.row(i);
      double* d = dz.row(i);
      double m = z[0];
      for (std::size_t c = 1; c < classes; ++c) m = std::max(m, z[c]);
      double sum = 0.0;
      for (std::size_t c = 0; c < classes; ++c) {
        d[c] = std::exp(z[c] - m);
        sum += d[c];
      }
      for (std::size_t c = 0; c < classes; ++c) d[c] /= sum;
      d[static_cast<std::size_t>(batch.labels[i])] -= 1.0;
      for (std::size_t c = 0; c < classes; ++c) d[c] *= inv_b;
    }
  }

  for (int l = layers - 1; l >= 0; --l) {
    const auto& wseg = theta.layout->segments[2 * static_cast<std::size_t>(l)];
    const auto& bseg = theta.layout->segments[2 * static_cast<std::size_t>(l) + 1];
    const auto n_in = static_cast<std::size_t>(spec.layer_sizes[l]);
    const auto n_out = static_cast<std::size_t>(spec.layer_sizes[l + 1]);
    const DenseMatrix& a_in = fp.activations[l];

    // dW = a_inT dz, db = column sums of dz.
    double* dw = grad.values.data() + wseg.offset;
    double* db = grad.values.data() + bseg.offset;
    for (std::size_t i = 0; i < batch_n; ++i) {
      const double* arow = a_in.row(i);
      const double* drow = dz.row(i);
      for (std::size_t j = 0; j < n_out; ++j) db[j] += drow[j];
      for (std::size_t k = 0; k < n_in; ++k) {
        const double av = arow[k];
        if (av == 0.0) continue;
        double* dwrow = dw + k * n_out;
        for (std::size_t j = 0; j < n_out; ++j) dwrow[j] += av * drow[j];
      }
    }

    if (l > 0) {
      // dz_prev = (dz @ WT) masked by ReLU support (derivative 0 at 0).
      const double* w = theta.values.data() + wseg.offset;
      DenseMatrix dz_prev(batch_n, n_in, 0.0);
      for (std::size_t i = 0; i < batch_n; ++i) {
        const double* drow = dz.row(i);
        const double* arow = a_in.row(i);
        double* prow = dz_prev.row(i);
        for (std::size_t k = 0; k < n_in; ++k) {
          if (arow[k] <= 0.0) continue;  // ReLU output 0 => pre-activation <= 0
          const double* wrow = w + k * n_out;
          double s = 0.0;
          for (std::size_t j = 0; j < n_out; ++j) s += drow[j] * wrow[j];
          prow[k] = s;
        }
      }
      dz = std::move(dz_prev);
    }
  }

  if (!grad.all_finite()) throw NumericalError("gradient contains non-finite entries");
  return fp.loss;
}

}  // namespace oho
