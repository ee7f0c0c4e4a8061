// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ckmbeam/strategy.hpp"

namespace ckmbeam {

struct MultiUserOptions {
  WeightOptions weights;
  double eta = 0.9;  // similarity cut-off relative to the best point
};

/// Search state of one user during a joint episode.
struct UserState {
  int id = 0;
  std::vector<WeightedPoint> points;  // live candidate positions
  BeamWeightTable table;
  PrunedTree tree;

  bool active() const { return !tree.resolved(); }
};

UserState make_user(const CkmGrid& ckm, int id, std::vector<WeightedPoint> prior,
                    const WeightOptions& options);

/// Layer maximising the sum over active users of l1-normalised rewards.
/// Every user's rewards are divided by the sum of their absolute values, so
/// path-loss scale does not favour any user. Throws when no user is active.
int joint_layer(std::span<const UserState> users);

/// Role of a user in a round: 1 probes at the round's layer, 0 only
/// listens, -1 has finished.
std::vector<int> user_indicators(std::span<const int> single_user_layers, int round_layer,
                                 int num_layers);

struct RoundSelection {
  int layer = 0;  // 0 when every user has finished
  int joint = 0;
  std::vector<int> single_user;  // per-user optimal layer (L+1 when finished)
  std::vector<int> indicators;
};

/// Round layer = min(joint layer, single-user layers of active users). If
/// the joint layer is above every single-user layer, users that still have
/// candidates at it are the ones that probe.
RoundSelection select_round(std::span<const UserState> users);

/// Deduplicated, index-ordered union of the probing users' candidates.
std::vector<BeamId> union_beams(std::span<const UserState> users, std::span<const int> indicators,
                                int layer);

struct MapGain {
  std::vector<double> gains;
  std::size_t strongest = 0;  // ties to the smaller position
};

MapGain map_gain_vector(const CkmGrid& ckm, std::size_t grid_index, std::span<const BeamId> beams);

/// Cosine similarity of two non-negative gain vectors; 0 when either is zero.
double similarity(std::span<const double> observed, std::span<const double> mapped);

/// Keeps points whose similarity exceeds eta * best. With `observed_best`
/// set, the point's map-strongest beam must also match it. If nothing
/// survives, the best-similarity points are kept regardless of the beam.
std::vector<WeightedPoint> prune_user_points(const CkmGrid& ckm, std::span<const WeightedPoint> points,
                                             std::span<const BeamId> probed,
                                             std::span<const double> observed,
                                             std::optional<std::size_t> observed_best, double eta);

struct JointRound {
  int layer = 0;
  int joint_layer = 0;
  std::vector<int> indicators;
  std::vector<BeamId> probed;  // empty on free descent
  std::vector<std::vector<double>> observations;  // per user, empty unless listening
  std::vector<std::optional<BeamId>> reported;    // strongest beam of probing users
  std::vector<std::size_t> points_after;          // per-user point count after pruning
  bool free_descent = false;
};

struct MultiUserResult {
  std::vector<BeamId> chosen;
  int total_overhead = 0;
  /// Per-user share of the probes: each probed beam is charged to the
  /// lowest-id probing user whose candidates include it. Sums to the total.
  std::vector<int> attributed_overhead;
  std::vector<JointRound> rounds;
};

MultiUserResult run_multi_user(const CkmGrid& ckm, std::span<const std::vector<WeightedPoint>> priors,
                               std::span<Prober* const> ues, const MultiUserOptions& options = {});

}  // namespace ckmbeam
