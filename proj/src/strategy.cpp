// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckmbeam {

std::vector<Activation> enumerate_activations(int from_layer, int num_layers) {
  if (from_layer < 0 || from_layer >= num_layers)
    throw std::invalid_argument("enumerate_activations: nothing left to search");
  const int optional = num_layers - from_layer - 1;
  std::vector<Activation> out;
  out.reserve(std::size_t{1} << optional);
  for (unsigned mask = 0; mask < (1u << optional); ++mask) {
    Activation a;
    for (int i = 0; i < optional; ++i) {
      if (mask & (1u << i)) a.push_back(from_layer + 1 + i);
    }
    a.push_back(num_layers);
    out.push_back(std::move(a));
  }
  return out;
}

int overhead_for_target(const PrunedTree& tree, const Activation& activation, int target) {
  const int L = tree.num_layers();
  if (activation.empty() || activation.back() != L)
    throw std::invalid_argument("overhead_for_target: activation must end at the bottom layer");
  if (!std::is_sorted(activation.begin(), activation.end()) ||
      activation.front() <= tree.root().layer)
    throw std::invalid_argument("overhead_for_target: activation must be ascending below the root");
  const BeamId leaf{L, target};
  if (!tree.contains(leaf) || !in_subtree(leaf, tree.root()))
    throw std::invalid_argument("overhead_for_target: target is not a bottom candidate");

  int total = static_cast<int>(tree.count_under(tree.root(), activation.front()));
  BeamId known = ancestor_at(leaf, activation.front());
  for (std::size_t i = 1; i < activation.size(); ++i) {
    const int sub = static_cast<int>(tree.count_under(known, activation[i]));
    if (sub >= 2) total += sub;
    known = ancestor_at(leaf, activation[i]);
  }
  return total;
}

double reward(const PrunedTree& tree, const BeamWeightTable& table, const Activation& activation) {
  const int L = tree.num_layers();
  double r = 0.0;
  for (int n : tree.candidates_under(tree.root(), L))
    r -= table.weight({L, n}) * overhead_for_target(tree, activation, n);
  return r;
}

bool better_plan(const Activation& a, double ra, const Activation& b, double rb) {
  const double tol = 1e-9 * std::max(std::abs(ra), std::abs(rb));
  if (ra > rb + tol) return true;
  if (rb > ra + tol) return false;
  if (a.size() != b.size()) return a.size() < b.size();
  return a.front() > b.front();
}

LayerPlan plan_layer(const PrunedTree& tree, const BeamWeightTable& table) {
  const int L = tree.num_layers();
  if (tree.resolved() || tree.root().layer >= L) return {L + 1, {}, 0.0};
  LayerPlan best;
  bool have = false;
  for (auto& a : enumerate_activations(tree.root().layer, L)) {
    const double r = reward(tree, table, a);
    if (!have || better_plan(a, r, best.activation, best.reward)) {
      best = {a.front(), std::move(a), r};
      have = true;
    }
  }
  return best;
}

int optimal_layer(const PrunedTree& tree, const BeamWeightTable& table) {
  return plan_layer(tree, table).layer;
}

ChannelProber::ChannelProber(const HierarchicalCodebook& codebook, CVector channel,
                             double noise_std, Rng rng)
    : codebook_(&codebook), channel_(std::move(channel)), noise_std_(noise_std), rng_(rng) {
  if (channel_.size() != static_cast<std::size_t>(codebook.num_antennas()))
    throw std::invalid_argument("ChannelProber: channel length does not match the codebook");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("ChannelProber: noise_std must be >= 0");
}

double ChannelProber::measure(BeamId beam) {
  return probe(channel_, codebook_->codeword(beam), noise_std_, rng_);
}

int SearchResult::transcript_probes() const {
  int n = 0;
  for (const auto& r : transcript) n += static_cast<int>(r.probed.size());
  return n;
}

std::size_t strongest(std::span<const double> magnitudes) {
  if (magnitudes.empty()) throw std::invalid_argument("strongest: no measurements");
  std::size_t best = 0;
  for (std::size_t i = 1; i < magnitudes.size(); ++i) {
    if (magnitudes[i] > magnitudes[best]) best = i;
  }
  return best;
}

SearchResult run_search(const CkmGrid* ckm, BeamWeightTable table, Prober& ue,
                        const LayerPolicy& policy) {
  PrunedTree tree = candidate_beams(table);
  const int L = tree.num_layers();
  SearchResult result;
  while (!tree.resolved()) {
    const int layer = policy(tree, table);
    if (layer <= tree.root().layer || layer > L)
      throw std::logic_error("run_search: policy returned an invalid layer");
    const auto set = tree.candidates_under(tree.root(), layer);
    ProbeRound round;
    round.layer = layer;
    if (set.size() == 1) {
      round.free_descent = true;
      round.observed = {layer, set.front()};
    } else {
      for (int n : set) {
        round.probed.push_back({layer, n});
        round.magnitudes.push_back(ue.measure({layer, n}));
      }
      result.overhead += static_cast<int>(set.size());
      round.observed = round.probed[strongest(round.magnitudes)];
    }
    apply_observation(ckm, table, tree, round.observed);
    result.transcript.push_back(std::move(round));
  }
  result.chosen = tree.resolved_beam();
  return result;
}

SearchResult run_single_user(const CkmGrid& ckm, std::span<const WeightedPoint> prior, Prober& ue,
                             const WeightOptions& options) {
  return run_search(&ckm, compute_point_weights(ckm, prior, options), ue,
                    [](const PrunedTree& t, const BeamWeightTable& w) { return optimal_layer(t, w); });
}

}  // namespace ckmbeam
