#include "oho/diagnostics.hpp"

#include <cmath>

#include "oho/errors.hpp"

namespace oho {

double gradient_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionError("gradient_cosine: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {
CorrelationStat stats_of(const std::deque<double>& xs) {
  CorrelationStat s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(var / n);
  return s;
}
}  // namespace

std::vector<CorrelationStat> gradient_correlation(const std::vector<std::vector<double>>& grads,
                                                  std::size_t window) {
  if (window < 2) throw ConfigError("correlation window must be >= 2", "diagnostics.window");
  std::vector<CorrelationStat> out;
  if (grads.size() < window) return out;

  std::vector<double> cos(grads.size() - 1);
  for (std::size_t i = 0; i + 1 < grads.size(); ++i)
    cos[i] = gradient_cosine(grads[i], grads[i + 1]);

  for (std::size_t t = 0; t + window <= grads.size(); ++t) {
    std::deque<double> span(cos.begin() + static_cast<std::ptrdiff_t>(t),
                            cos.begin() + static_cast<std::ptrdiff_t>(t + window - 1));
    out.push_back(stats_of(span));
  }
  return out;
}

GradientCorrelationTracker::GradientCorrelationTracker(std::size_t window) : window_(window) {
  if (window_ < 2) throw ConfigError("correlation window must be >= 2", "diagnostics.window");
}

void GradientCorrelationTracker::push(const std::vector<double>& grad) {
  if (has_prev_) {
    cosines_.push_back(gradient_cosine(prev_, grad));
    if (cosines_.size() > window_ - 1) cosines_.pop_front();
  }
  prev_ = grad;
  has_prev_ = true;
}

std::optional<CorrelationStat> GradientCorrelationTracker::current() const {
  if (cosines_.size() < window_ - 1) return std::nullopt;
  return stats_of(cosines_);
}

std::vector<double> influence_norms(const InfluenceMatrix& gamma) {
  std::vector<double> out(gamma.cols, 0.0);
  for (std::size_t c = 0; c < gamma.cols; ++c) {
    const double* col = gamma.col(c);
    double s = 0.0;
    for (std::size_t i = 0; i < gamma.rows; ++i) s += col[i] * col[i];
    out[c] = s;
  }
  return out;
}

}  // namespace oho
