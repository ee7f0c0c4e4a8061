// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/beam_tree.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ckmbeam {

BeamWeightTable BeamWeightTable::from_bottom_weights(std::span<const double> bottom, double beta) {
  if (bottom.size() < 2 || !std::has_single_bit(bottom.size()))
    throw std::invalid_argument("from_bottom_weights: size must be a power of two >= 2");
  BeamWeightTable t;
  t.num_layers_ = static_cast<int>(std::bit_width(bottom.size()) - 1);
  t.beta_ = beta;
  for (double w : bottom) {
    if (!(w >= 0.0)) throw std::invalid_argument("from_bottom_weights: weights must be >= 0");
  }
  t.base_bottom_.assign(bottom.begin(), bottom.end());
  t.weights_.resize(static_cast<std::size_t>(t.num_layers_));
  for (int l = 1; l <= t.num_layers_; ++l) t.weights_[l - 1].assign(std::size_t{1} << l, 0.0);
  t.rebuild(kVirtualRoot);
  return t;
}

double BeamWeightTable::weight(BeamId b) const {
  if (!is_valid(b, num_layers_)) throw std::out_of_range("weight: invalid beam " + to_string(b));
  return weights_[b.layer - 1][b.index - 1];
}

std::span<const double> BeamWeightTable::layer_weights(int layer) const {
  if (layer < 1 || layer > num_layers_) throw std::out_of_range("layer_weights: bad layer");
  return weights_[layer - 1];
}

double BeamWeightTable::total() const {
  double s = 0.0;
  for (double w : weights_.front()) s += w;
  return s;
}

std::size_t BeamWeightTable::alive_points() const {
  return static_cast<std::size_t>(std::count_if(points_.begin(), points_.end(),
                                                [](const PointEntry& p) { return p.alive; }));
}

double BeamWeightTable::point_weight(std::size_t slot, int bottom_index) const {
  const auto& p = points_.at(slot);
  if (!p.alive) return 0.0;
  for (const auto& [n, w] : p.beams) {
    if (n == bottom_index) return w;
  }
  return 0.0;
}

void BeamWeightTable::propagate_up() {
  for (int l = num_layers_ - 1; l >= 1; --l) {
    auto& up = weights_[l - 1];
    const auto& down = weights_[l];
    for (std::size_t n = 0; n < up.size(); ++n) up[n] = down[2 * n] + down[2 * n + 1];
  }
}

void BeamWeightTable::rebuild(BeamId root) {
  auto& bottom = weights_[num_layers_ - 1];
  if (points_.empty()) {
    bottom = base_bottom_;
  } else {
    std::fill(bottom.begin(), bottom.end(), 0.0);
    for (const auto& p : points_) {
      if (!p.alive) continue;
      for (const auto& [n, w] : p.beams) bottom[n - 1] += w;
    }
  }
  if (root.layer > 0) {
    const auto [first, last] = descendant_range(root, num_layers_);
    for (int n = 1; n <= static_cast<int>(bottom.size()); ++n) {
      if (n < first || n > last) bottom[n - 1] = 0.0;
    }
  }
  propagate_up();
}

void BeamWeightTable::reset_uniform(std::span<const int> bottom_indices, BeamId root) {
  points_.clear();
  base_bottom_.assign(std::size_t{1} << num_layers_, 0.0);
  for (int n : bottom_indices) base_bottom_.at(static_cast<std::size_t>(n - 1)) = 1.0;
  rebuild(root);
}

BeamWeightTable compute_point_weights(const CkmGrid& ckm, std::span<const WeightedPoint> points,
                                      const WeightOptions& options) {
  if (points.empty()) throw std::invalid_argument("compute_point_weights: empty prior");
  if (!(options.beta > 0.0 && options.beta <= 1.0))
    throw std::invalid_argument("compute_point_weights: beta must be in (0, 1]");
  if (options.retained_beams < 0)
    throw std::invalid_argument("compute_point_weights: retained_beams must be >= 0");

  BeamWeightTable t;
  t.num_layers_ = ckm.num_layers();
  t.beta_ = options.beta;
  t.weights_.resize(static_cast<std::size_t>(t.num_layers_));
  for (int l = 1; l <= t.num_layers_; ++l) t.weights_[l - 1].assign(std::size_t{1} << l, 0.0);

  const int L = t.num_layers_;
  const int n_bottom = 1 << L;
  std::vector<std::pair<double, int>> gains(static_cast<std::size_t>(n_bottom));
  t.points_.reserve(points.size());
  for (const auto& wp : points) {
    if (wp.grid_index >= ckm.point_count())
      throw std::out_of_range("compute_point_weights: point outside the CKM grid");
    if (!(wp.probability >= 0.0))
      throw std::invalid_argument("compute_point_weights: negative probability");
    double best = 0.0;
    for (int n = 1; n <= n_bottom; ++n) {
      const double g = ckm.gain(wp.grid_index, {L, n});
      gains[n - 1] = {g, n};
      best = std::max(best, g);
    }
    const double threshold = options.beta * best;
    BeamWeightTable::PointEntry e;
    e.grid_index = wp.grid_index;
    e.probability = wp.probability;
    for (const auto& [g, n] : gains) {
      if (g >= threshold && g > 0.0) e.beams.emplace_back(n, wp.probability * g);
    }
    if (options.retained_beams > 0 && e.beams.size() > static_cast<std::size_t>(options.retained_beams)) {
      std::stable_sort(e.beams.begin(), e.beams.end(), [&](const auto& a, const auto& b) {
        return gains[a.first - 1].first > gains[b.first - 1].first;
      });
      e.beams.resize(static_cast<std::size_t>(options.retained_beams));
      std::sort(e.beams.begin(), e.beams.end());
    }
    t.points_.push_back(std::move(e));
  }
  t.rebuild(kVirtualRoot);
  return t;
}

std::span<const int> PrunedTree::candidates(int layer) const {
  if (layer < 1 || layer > num_layers_) throw std::out_of_range("candidates: bad layer");
  return candidates_[layer - 1];
}

std::span<const int> PrunedTree::candidates_under(BeamId node, int layer) const {
  if (layer <= node.layer) throw std::out_of_range("candidates_under: layer must be below node");
  const auto c = candidates(layer);
  const auto [first, last] = descendant_range(node, layer);
  const auto lo = std::lower_bound(c.begin(), c.end(), first);
  const auto hi = std::upper_bound(lo, c.end(), last);
  return c.subspan(static_cast<std::size_t>(lo - c.begin()), static_cast<std::size_t>(hi - lo));
}

bool PrunedTree::contains(BeamId b) const {
  if (!is_valid(b, num_layers_)) return false;
  const auto c = candidates(b.layer);
  return std::binary_search(c.begin(), c.end(), b.index);
}

BeamId PrunedTree::resolved_beam() const {
  if (!resolved()) throw std::logic_error("search tree not resolved");
  return {num_layers_, candidates(num_layers_).front()};
}

PrunedTree candidate_beams(const BeamWeightTable& table, BeamId root) {
  PrunedTree tree;
  tree.num_layers_ = table.num_layers();
  tree.root_ = root;
  tree.candidates_.resize(static_cast<std::size_t>(tree.num_layers_));
  for (int l = 1; l <= tree.num_layers_; ++l) {
    const auto w = table.layer_weights(l);
    for (int n = 1; n <= static_cast<int>(w.size()); ++n) {
      if (w[n - 1] > 0.0) tree.candidates_[l - 1].push_back(n);
    }
  }
  if (tree.candidates_.back().empty())
    throw DegenerateError("candidate_beams: no codeword carries positive weight");
  return tree;
}

int map_argmax(const CkmGrid& ckm, std::size_t grid_index, int layer, std::span<const int> indices) {
  if (indices.empty()) throw std::invalid_argument("map_argmax: empty beam set");
  int best = indices.front();
  float best_gain = ckm.gain(grid_index, {layer, best});
  for (int n : indices.subspan(1)) {
    const float g = ckm.gain(grid_index, {layer, n});
    if (g > best_gain || (g == best_gain && n < best)) {
      best = n;
      best_gain = g;
    }
  }
  return best;
}

void apply_observation(const CkmGrid* ckm, BeamWeightTable& table, PrunedTree& tree,
                       BeamId observed) {
  if (!tree.contains(observed) || observed.layer <= tree.root().layer ||
      !in_subtree(observed, tree.root()))
    throw std::invalid_argument("apply_observation: " + to_string(observed) +
                                " is not a candidate below the current root");
  const int L = tree.num_layers();
  const auto probed = tree.candidates_under(tree.root(), observed.layer);
  std::vector<int> fallback;
  if (observed.layer == L) {
    fallback.push_back(observed.index);
  } else {
    const auto below = tree.candidates_under(observed, L);
    fallback.assign(below.begin(), below.end());
  }

  if (ckm != nullptr && table.point_backed() && probed.size() > 1) {
    const auto pts = table.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!pts[i].alive) continue;
      if (map_argmax(*ckm, pts[i].grid_index, observed.layer, probed) != observed.index)
        table.kill_point(i);
    }
  }

  table.rebuild(observed);
  if (!(table.total() > 0.0)) table.reset_uniform(fallback, observed);
  tree = candidate_beams(table, observed);
}

}  // namespace ckmbeam
