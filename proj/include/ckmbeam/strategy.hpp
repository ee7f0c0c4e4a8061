// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ckmbeam/array_channel.hpp"
#include "ckmbeam/beam_tree.hpp"
#include "ckmbeam/codebook.hpp"

namespace ckmbeam {

/// Ascending list of layers to probe; always ends with the bottom layer.
using Activation = std::vector<int>;

/// Every activation over layers (from_layer, L] that contains L, in a fixed
/// order (bitmask over the optional layers, ascending).
std::vector<Activation> enumerate_activations(int from_layer, int num_layers);

/// Number of probes needed to isolate bottom candidate `target` when
/// following `activation` through the current tree. The first active layer
/// costs all of its candidates; later layers cost their candidates under the
/// previously identified ancestor, and nothing when only one is left.
int overhead_for_target(const PrunedTree& tree, const Activation& activation, int target);

/// -sum_n w_{L,n} * overhead(n) over the bottom candidates.
double reward(const PrunedTree& tree, const BeamWeightTable& table, const Activation& activation);

/// True when (a, ra) should be preferred over (b, rb): larger reward, then
/// fewer active layers, then a deeper first layer. Rewards within a relative
/// 1e-9 count as tied.
bool better_plan(const Activation& a, double ra, const Activation& b, double rb);

struct LayerPlan {
  int layer = 0;  // num_layers + 1 when the search is already resolved
  Activation activation;
  double reward = 0.0;
};

LayerPlan plan_layer(const PrunedTree& tree, const BeamWeightTable& table);

/// First layer of the best activation below the current root.
int optimal_layer(const PrunedTree& tree, const BeamWeightTable& table);

/// The UE side of a probing round: returns |y| for one transmitted beam.
class Prober {
 public:
  virtual ~Prober() = default;
  virtual double measure(BeamId beam) = 0;
};

/// Probes a fixed channel through the codebook with additive noise.
class ChannelProber final : public Prober {
 public:
  ChannelProber(const HierarchicalCodebook& codebook, CVector channel, double noise_std, Rng rng);

  double measure(BeamId beam) override;
  const CVector& channel() const { return channel_; }
  double noise_std() const { return noise_std_; }

 private:
  const HierarchicalCodebook* codebook_;
  CVector channel_;
  double noise_std_;
  Rng rng_;
};

struct ProbeRound {
  int layer = 0;
  std::vector<BeamId> probed;     // empty on free descent
  std::vector<double> magnitudes; // aligned with `probed`
  BeamId observed{};
  bool free_descent = false;
};

struct SearchResult {
  BeamId chosen{};
  int overhead = 0;
  std::vector<ProbeRound> transcript;

  int transcript_probes() const;
};

/// Picks the layer to probe next from the live tree.
using LayerPolicy = std::function<int(const PrunedTree&, const BeamWeightTable&)>;

/// Shared probe/feedback loop: probe every candidate at the chosen layer
/// (or descend for free when there is one), report the strongest, update.
SearchResult run_search(const CkmGrid* ckm, BeamWeightTable table, Prober& ue,
                        const LayerPolicy& policy);

/// Reward-driven single-user search.
SearchResult run_single_user(const CkmGrid& ckm, std::span<const WeightedPoint> prior, Prober& ue,
                             const WeightOptions& options = {});

/// Index of the largest magnitude; ties go to the earliest entry.
std::size_t strongest(std::span<const double> magnitudes);

}  // namespace ckmbeam
