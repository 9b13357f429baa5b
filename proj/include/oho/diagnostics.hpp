#ifndef OHO_DIAGNOSTICS_HPP
#define OHO_DIAGNOSTICS_HPP

#include <deque>
#include <optional>
#include <vector>

#include "oho/influence.hpp"

namespace oho {

struct CorrelationStat {
  double mean = 0.0;
  double stddev = 0.0;
};

// Cosine of two gradient vectors; zero if either has zero norm.
double gradient_cosine(const std::vector<double>& a, const std::vector<double>& b);

// Sliding-window statistics of the cosines between consecutive gradients.
// Entry t covers grads[t .. t+window-1]; the series is empty until at least
// `window` gradients exist. Throws ConfigError when window < 2.
std::vector<CorrelationStat> gradient_correlation(const std::vector<std::vector<double>>& grads,
                                                  std::size_t window);

// Online form of gradient_correlation: push one gradient per step; current()
// becomes available once a full window has been seen and matches the offline
// series entry ending at that step.
class GradientCorrelationTracker {
 public:
  explicit GradientCorrelationTracker(std::size_t window);

  void push(const std::vector<double>& grad);
  std::optional<CorrelationStat> current() const;

 private:
  std::size_t window_;
  std::vector<double> prev_;
  bool has_prev_ = false;
  std::deque<double> cosines_;  // at most window-1 entries
};

// Squared L2 norm of every influence column, in phi order.
std::vector<double> influence_norms(const InfluenceMatrix& gamma);

}  // namespace oho

#endif  // OHO_DIAGNOSTICS_HPP
