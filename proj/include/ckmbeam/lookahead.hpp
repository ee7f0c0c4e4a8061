// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include "ckmbeam/strategy.hpp"

namespace ckmbeam {

enum class Topology { full_tree, asymmetric_binary, single_chain, forced_descent, terminal };

const char* to_string(Topology t);

/// The candidate nodes within two layers of the current root.
struct LookaheadView {
  BeamId root = kVirtualRoot;
  int num_layers = 0;
  std::vector<BeamId> children;
  std::array<std::vector<BeamId>, 2> grandchildren;  // per child, in child order
  std::array<std::vector<double>, 2> grandchild_weights;
};

LookaheadView extract_view(const PrunedTree& tree, const BeamWeightTable& table);

/// Throws DegenerateError when the root has no candidate children.
Topology classify(const LookaheadView& view);

/// Expected probes for the asymmetric case, by role: `pair_a`/`pair_b` sit
/// under the two-grandchild branch, `single` under the other.
inline double exhaustive_cost(double pair_a, double pair_b, double single) {
  return 3.0 * (pair_a + pair_b + single);
}
inline double hierarchical_cost(double pair_a, double pair_b, double single) {
  return 4.0 * pair_a + 4.0 * pair_b + 2.0 * single;
}

/// Layer to probe next given the view's topology.
int next_layer(const LookaheadView& view, Topology topology);
int next_layer(const LookaheadView& view);

/// Two-layer lookahead single-user search.
SearchResult run_lookahead(const CkmGrid& ckm, std::span<const WeightedPoint> prior, Prober& ue,
                           const WeightOptions& options = {});

/// Lookahead policy for run_search().
int lookahead_policy(const PrunedTree& tree, const BeamWeightTable& table);

}  // namespace ckmbeam
