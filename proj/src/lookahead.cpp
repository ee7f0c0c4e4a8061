// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/lookahead.hpp"

#include <stdexcept>

namespace ckmbeam {

const char* to_string(Topology t) {
  switch (t) {
    case Topology::full_tree: return "full-tree";
    case Topology::asymmetric_binary: return "asymmetric-binary";
    case Topology::single_chain: return "single-chain";
    case Topology::forced_descent: return "forced-descent";
    case Topology::terminal: return "terminal";
  }
  return "?";
}

LookaheadView extract_view(const PrunedTree& tree, const BeamWeightTable& table) {
  LookaheadView v;
  v.root = tree.root();
  v.num_layers = tree.num_layers();
  const int r = v.root.layer;
  if (r >= v.num_layers) return v;
  for (int n : tree.candidates_under(v.root, r + 1)) v.children.push_back({r + 1, n});
  if (r + 2 <= v.num_layers) {
    for (std::size_t c = 0; c < v.children.size() && c < 2; ++c) {
      for (int n : tree.candidates_under(v.children[c], r + 2)) {
        v.grandchildren[c].push_back({r + 2, n});
        v.grandchild_weights[c].push_back(table.weight({r + 2, n}));
      }
    }
  }
  return v;
}

Topology classify(const LookaheadView& v) {
  if (v.children.empty()) throw DegenerateError("classify: root has no candidate children");
  if (v.root.layer + 1 >= v.num_layers) return Topology::terminal;
  if (v.children.size() == 1) return Topology::forced_descent;
  const auto a = v.grandchildren[0].size();
  const auto b = v.grandchildren[1].size();
  if (a == 2 && b == 2) return Topology::full_tree;
  if (a == 1 && b == 1) return Topology::single_chain;
  return Topology::asymmetric_binary;
}

int next_layer(const LookaheadView& v, Topology t) {
  const int r = v.root.layer;
  switch (t) {
    case Topology::terminal:
    case Topology::forced_descent:
    case Topology::full_tree:
      return r + 1;
    case Topology::single_chain:
      return r + 2;
    case Topology::asymmetric_binary: {
      const std::size_t pair = v.grandchildren[0].size() == 2 ? 0 : 1;
      const auto& pw = v.grandchild_weights[pair];
      const double single = v.grandchild_weights[1 - pair].front();
      return hierarchical_cost(pw[0], pw[1], single) <= exhaustive_cost(pw[0], pw[1], single) ? r + 1
                                                                                             : r + 2;
    }
  }
  throw std::logic_error("next_layer: bad topology");
}

int next_layer(const LookaheadView& v) { return next_layer(v, classify(v)); }

int lookahead_policy(const PrunedTree& tree, const BeamWeightTable& table) {
  return next_layer(extract_view(tree, table));
}

SearchResult run_lookahead(const CkmGrid& ckm, std::span<const WeightedPoint> prior, Prober& ue,
                           const WeightOptions& options) {
  return run_search(&ckm, compute_point_weights(ckm, prior, options), ue, lookahead_policy);
}

}  // namespace ckmbeam
