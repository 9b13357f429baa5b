#include "oho/grouping.hpp"

#include <algorithm>

#include "oho/errors.hpp"

namespace oho {

std::string PhiEntry::name() const {
  std::string base;
  if (kind == HyperKind::lambda) {
    base = "lambda";
  } else if (applies_to_weight && applies_to_bias) {
    base = "alpha";
  } else {
    base = applies_to_weight ? "alpha_w" : "alpha_b";
  }
  return base + ".g" + std::to_string(group);
}

namespace {

GroupingScheme build(const ParamLayout& layout, GroupingMode mode, std::vector<int> segment_group,
                     int n_groups, bool tie_alpha) {
  GroupingScheme g;
  g.mode = mode;
  g.n_groups = n_groups;
  g.tie_alpha = tie_alpha;
  g.segment_group = std::move(segment_group);

  // Flattened phi order: per group, alpha (or alpha_w then alpha_b), then lambda.
  std::vector<std::size_t> alpha_w_idx(static_cast<std::size_t>(n_groups));
  std::vector<std::size_t> alpha_b_idx(static_cast<std::size_t>(n_groups));
  std::vector<std::size_t> lambda_idx(static_cast<std::size_t>(n_groups));
  for (int grp = 0; grp < n_groups; ++grp) {
    if (tie_alpha) {
      alpha_w_idx[grp] = alpha_b_idx[grp] = g.phi.size();
      g.phi.push_back({HyperKind::alpha, grp, true, true});
    } else {
      alpha_w_idx[grp] = g.phi.size();
      g.phi.push_back({HyperKind::alpha, grp, true, false});
      alpha_b_idx[grp] = g.phi.size();
      g.phi.push_back({HyperKind::alpha, grp, false, true});
    }
    lambda_idx[grp] = g.phi.size();
    g.phi.push_back({HyperKind::lambda, grp, true, true});
  }

  g.alpha_index.resize(layout.segments.size());
  g.lambda_index.resize(layout.segments.size());
  for (std::size_t s = 0; s < layout.segments.size(); ++s) {
    const int grp = g.segment_group[s];
    if (grp < 0 || grp >= n_groups)
      throw ConfigError("segment group id " + std::to_string(grp) + " outside [0, " +
                        std::to_string(n_groups) + ")",
                        "grouping");
    g.alpha_index[s] =
        layout.segments[s].kind == ParamKind::weight ? alpha_w_idx[grp] : alpha_b_idx[grp];
    g.lambda_index[s] = lambda_idx[grp];
  }
  return g;
}

}  // namespace

GroupingScheme make_grouping(const ParamLayout& layout, GroupingMode mode, int k) {
  return make_grouping(layout, mode, k, mode == GroupingMode::global);
}

GroupingScheme make_grouping(const ParamLayout& layout, GroupingMode mode, int k,
                             bool tie_alpha) {
  if (layout.segments.empty()) throw ConfigError("parameter layout has no segments", "grouping");
  int max_layer = 0;
  for (const auto& seg : layout.segments) max_layer = std::max(max_layer, seg.layer);
  const int n_layers = max_layer + 1;

  int n_groups = 1;
  std::vector<int> layer_group(static_cast<std::size_t>(n_layers), 0);
  switch (mode) {
    case GroupingMode::global:
      break;
    case GroupingMode::layerwise:
      n_groups = n_layers;
      for (int l = 0; l < n_layers; ++l) layer_group[l] = l;
      break;
    case GroupingMode::grouped: {
      if (k < 1 || k > n_layers)
        throw ConfigError("grouped mode needs 1 <= sets <= layer count (" +
                          std::to_string(n_layers) + "), got " + std::to_string(k),
                          "grouping.sets");
      n_groups = k;
      // Contiguous blocks; larger blocks go to the input side.
      int layer = 0;
      for (int grp = 0; grp < k; ++grp) {
        const int remaining_layers = n_layers - layer;
        const int remaining_groups = k - grp;
        const int take = (remaining_layers + remaining_groups - 1) / remaining_groups;
        for (int i = 0; i < take; ++i) layer_group[layer++] = grp;
      }
      break;
    }
  }

  std::vector<int> segment_group(layout.segments.size());
  for (std::size_t s = 0; s < layout.segments.size(); ++s)
    segment_group[s] = layer_group[static_cast<std::size_t>(layout.segments[s].layer)];
  return build(layout, mode, std::move(segment_group), n_groups, tie_alpha);
}

GroupingScheme make_grouping_from_assignment(const ParamLayout& layout,
                                             std::vector<int> segment_group, bool tie_alpha) {
  if (segment_group.size() != layout.segments.size())
    throw ConfigError("assignment length does not match segment count", "grouping");
  int n_groups = 0;
  for (int grp : segment_group) n_groups = std::max(n_groups, grp + 1);
  if (n_groups == 0) throw ConfigError("assignment has no groups", "grouping");
  return build(layout, GroupingMode::grouped, std::move(segment_group), n_groups, tie_alpha);
}

HyperVector make_hyper(const GroupingScheme& grouping, double alpha0, double lambda0) {
  HyperVector phi;
  phi.values.reserve(grouping.phi.size());
  for (const auto& entry : grouping.phi)
    phi.values.push_back(entry.kind == HyperKind::alpha ? alpha0 : lambda0);
  return phi;
}

void validate_hyper(const GroupingScheme& grouping, const HyperVector& phi) {
  if (phi.size() != grouping.phi_size())
    throw DimensionError("hyperparameter vector length " + std::to_string(phi.size()) +
                         " does not match grouping (" + std::to_string(grouping.phi_size()) + ")");
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (!(phi.values[i] >= 0.0))
      throw ConfigError("hyperparameter " + grouping.phi[i].name() + " must be >= 0", "phi");
}

}  // namespace oho
