#ifndef OHO_GROUPING_HPP
#define OHO_GROUPING_HPP

#include <string>
#include <vector>

#include "oho/network.hpp"

namespace oho {

enum class GroupingMode { global, grouped, layerwise };

enum class HyperKind { alpha, lambda };

// One hyperparameter slot: a learning rate restricted to a (group, kind)
// support, or a weight-decay coefficient covering a whole group.
struct PhiEntry {
  HyperKind kind = HyperKind::alpha;
  int group = 0;
  bool applies_to_weight = true;
  bool applies_to_bias = true;

  // alpha.g0 (tied), alpha_w.g0 / alpha_b.g0 (split), lambda.g0
  std::string name() const;
};

// Partition of parameter segments into hyperparameter groups, with the fixed
// flattened phi ordering per group: alpha (or alpha_w, alpha_b), then lambda.
struct GroupingScheme {
  GroupingMode mode = GroupingMode::global;
  int n_groups = 1;
  bool tie_alpha = true;

  std::vector<int> segment_group;  // one entry per layout segment
  std::vector<PhiEntry> phi;       // flattened hyperparameter order

  // Per-segment phi indices, precomputed for the update loops.
  std::vector<std::size_t> alpha_index;
  std::vector<std::size_t> lambda_index;

  std::size_t phi_size() const { return phi.size(); }
};

// Layer partition: global puts every layer in one group; grouped(k) splits the
// layers into k contiguous blocks with the larger blocks on the input side;
// layerwise gives each layer its own group. In global mode weight and bias
// share one learning rate unless tie_alpha overrides.
GroupingScheme make_grouping(const ParamLayout& layout, GroupingMode mode, int k = 1);
GroupingScheme make_grouping(const ParamLayout& layout, GroupingMode mode, int k, bool tie_alpha);

// Arbitrary segment-to-group assignment (used by tests and custom setups).
GroupingScheme make_grouping_from_assignment(const ParamLayout& layout,
                                             std::vector<int> segment_group, bool tie_alpha);

// Ordered hyperparameter values; layout and semantics live in GroupingScheme.
struct HyperVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

// Every alpha entry set to alpha0, every lambda entry to lambda0.
HyperVector make_hyper(const GroupingScheme& grouping, double alpha0, double lambda0);

// Throws ConfigError if any entry is negative or the length disagrees.
void validate_hyper(const GroupingScheme& grouping, const HyperVector& phi);

}  // namespace oho

#endif  // OHO_GROUPING_HPP
