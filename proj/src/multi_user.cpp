// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/multi_user.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ckmbeam {

UserState make_user(const CkmGrid& ckm, int id, std::vector<WeightedPoint> prior,
                    const WeightOptions& options) {
  UserState u;
  u.id = id;
  u.points = std::move(prior);
  u.table = compute_point_weights(ckm, u.points, options);
  u.tree = candidate_beams(u.table);
  return u;
}

int joint_layer(std::span<const UserState> users) {
  int top = -1;
  int L = 0;
  for (const auto& u : users) {
    if (!u.active()) continue;
    L = u.tree.num_layers();
    top = top < 0 ? u.tree.root().layer : std::min(top, u.tree.root().layer);
  }
  if (top < 0) throw std::invalid_argument("joint_layer: no active users");

  const auto activations = enumerate_activations(top, L);
  std::vector<double> score(activations.size(), 0.0);
  for (const auto& u : users) {
    if (!u.active()) continue;
    std::vector<double> r(activations.size());
    double norm = 0.0;
    for (std::size_t z = 0; z < activations.size(); ++z) {
      Activation eff;
      for (int l : activations[z]) {
        if (l > u.tree.root().layer) eff.push_back(l);
      }
      r[z] = reward(u.tree, u.table, eff);
      norm += std::abs(r[z]);
    }
    if (!(norm > 0.0)) continue;
    for (std::size_t z = 0; z < activations.size(); ++z) score[z] += r[z] / norm;
  }

  std::size_t best = 0;
  for (std::size_t z = 1; z < activations.size(); ++z) {
    if (better_plan(activations[z], score[z], activations[best], score[best])) best = z;
  }
  return activations[best].front();
}

std::vector<int> user_indicators(std::span<const int> su, int round_layer, int num_layers) {
  std::vector<int> out;
  out.reserve(su.size());
  for (int l : su) {
    if (l > num_layers) out.push_back(-1);
    else if (l == round_layer) out.push_back(1);
    else out.push_back(0);
  }
  return out;
}

RoundSelection select_round(std::span<const UserState> users) {
  RoundSelection sel;
  if (users.empty()) return sel;
  const int L = users.front().tree.num_layers();
  int min_su = L + 1;
  for (const auto& u : users) {
    const int l = u.active() ? optimal_layer(u.tree, u.table) : L + 1;
    sel.single_user.push_back(l);
    min_su = std::min(min_su, l);
  }
  if (min_su > L) {
    sel.indicators = user_indicators(sel.single_user, 0, L);
    return sel;
  }
  sel.joint = joint_layer(users);
  sel.layer = std::min(sel.joint, min_su);
  sel.indicators = user_indicators(sel.single_user, sel.layer, L);
  if (std::find(sel.indicators.begin(), sel.indicators.end(), 1) == sel.indicators.end()) {
    // Joint layer sits above every user's own choice: everyone who still
    // has candidates there takes part.
    for (std::size_t k = 0; k < users.size(); ++k) {
      if (sel.indicators[k] == 0 && users[k].tree.root().layer < sel.layer) sel.indicators[k] = 1;
    }
  }
  return sel;
}

std::vector<BeamId> union_beams(std::span<const UserState> users, std::span<const int> indicators,
                                int layer) {
  std::vector<int> idx;
  for (std::size_t k = 0; k < users.size(); ++k) {
    if (indicators[k] != 1) continue;
    const auto c = users[k].tree.candidates_under(users[k].tree.root(), layer);
    idx.insert(idx.end(), c.begin(), c.end());
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<BeamId> out;
  out.reserve(idx.size());
  for (int n : idx) out.push_back({layer, n});
  return out;
}

MapGain map_gain_vector(const CkmGrid& ckm, std::size_t grid_index, std::span<const BeamId> beams) {
  if (beams.empty()) throw std::invalid_argument("map_gain_vector: empty beam set");
  MapGain m;
  m.gains.reserve(beams.size());
  for (const auto& b : beams) m.gains.push_back(ckm.gain(grid_index, b));
  m.strongest = strongest(m.gains);
  return m;
}

double similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("similarity: length mismatch");
  if (a.empty()) throw std::invalid_argument("similarity: empty vectors");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<WeightedPoint> prune_user_points(const CkmGrid& ckm, std::span<const WeightedPoint> points,
                                             std::span<const BeamId> probed,
                                             std::span<const double> observed,
                                             std::optional<std::size_t> observed_best, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("prune_user_points: eta must be in (0, 1]");
  if (probed.size() != observed.size())
    throw std::invalid_argument("prune_user_points: observation length mismatch");
  if (points.empty()) return {};

  std::vector<double> ups(points.size());
  std::vector<std::size_t> best_beam(points.size());
  double top = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const MapGain m = map_gain_vector(ckm, points[i].grid_index, probed);
    ups[i] = similarity(observed, m.gains);
    best_beam[i] = m.strongest;
    top = std::max(top, ups[i]);
  }

  std::vector<WeightedPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(ups[i] > eta * top)) continue;
    if (observed_best && best_beam[i] != *observed_best) continue;
    out.push_back(points[i]);
  }
  if (out.empty()) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (ups[i] == top) out.push_back(points[i]);
    }
  }
  return out;
}

namespace {

// Replaces the user's points and rebuilds the tree under `root`. Returns
// false (leaving the user untouched) when nothing keeps positive weight.
bool rebuild_user(const CkmGrid& ckm, UserState& u, std::vector<WeightedPoint> points, BeamId root,
                  const WeightOptions& options) {
  BeamWeightTable t = compute_point_weights(ckm, points, options);
  t.rebuild(root);
  if (!(t.total() > 0.0)) return false;
  u.points = std::move(points);
  u.table = std::move(t);
  u.tree = candidate_beams(u.table, root);
  return true;
}

void descend_uniform(UserState& u, BeamId root) {
  const int L = u.tree.num_layers();
  std::vector<int> keep;
  if (root.layer == L) {
    keep.push_back(root.index);
  } else {
    const auto c = u.tree.candidates_under(root, L);
    keep.assign(c.begin(), c.end());
  }
  u.table.reset_uniform(keep, root);
  u.tree = candidate_beams(u.table, root);
}

}  // namespace

MultiUserResult run_multi_user(const CkmGrid& ckm, std::span<const std::vector<WeightedPoint>> priors,
                               std::span<Prober* const> ues, const MultiUserOptions& options) {
  if (priors.empty()) throw std::invalid_argument("run_multi_user: need at least one user");
  if (priors.size() != ues.size()) throw std::invalid_argument("run_multi_user: one prober per user");
  if (!(options.eta > 0.0 && options.eta <= 1.0))
    throw std::invalid_argument("run_multi_user: eta must be in (0, 1]");

  const std::size_t K = priors.size();
  std::vector<UserState> users;
  users.reserve(K);
  for (std::size_t k = 0; k < K; ++k)
    users.push_back(make_user(ckm, static_cast<int>(k), priors[k], options.weights));

  MultiUserResult result;
  result.attributed_overhead.assign(K, 0);

  for (;;) {
    const RoundSelection sel = select_round(users);
    if (sel.layer == 0) break;
    const int layer = sel.layer;

    JointRound round;
    round.layer = layer;
    round.joint_layer = sel.joint;
    round.indicators = sel.indicators;
    round.observations.resize(K);
    round.reported.resize(K);

    const std::vector<BeamId> beams = union_beams(users, sel.indicators, layer);
    if (beams.size() == 1) {
      round.free_descent = true;
      for (std::size_t k = 0; k < K; ++k) {
        if (sel.indicators[k] != 1) continue;
        UserState& u = users[k];
        u.table.rebuild(beams.front());
        if (!(u.table.total() > 0.0)) descend_uniform(u, beams.front());
        else u.tree = candidate_beams(u.table, beams.front());
      }
    } else {
      round.probed = beams;
      result.total_overhead += static_cast<int>(beams.size());
      for (const auto& b : beams) {
        for (std::size_t k = 0; k < K; ++k) {
          if (sel.indicators[k] == 1 && users[k].tree.contains(b) &&
              in_subtree(b, users[k].tree.root())) {
            ++result.attributed_overhead[k];
            break;
          }
        }
      }

      for (std::size_t k = 0; k < K; ++k) {
        if (sel.indicators[k] == -1) continue;
        UserState& u = users[k];
        auto& obs = round.observations[k];
        for (const auto& b : beams) obs.push_back(ues[k]->measure(b));

        if (sel.indicators[k] == 1) {
          const std::size_t best = strongest(obs);
          round.reported[k] = beams[best];

          // Descend to the reported beam, or to the strongest of this
          // user's own candidates when the report belongs to someone else.
          std::size_t pick = best;
          if (!u.tree.contains(beams[pick])) {
            double top = -1.0;
            for (std::size_t i = 0; i < beams.size(); ++i) {
              if (u.tree.contains(beams[i]) && in_subtree(beams[i], u.tree.root()) && obs[i] > top) {
                top = obs[i];
                pick = i;
              }
            }
          }
          const BeamId root = beams[pick];
          auto kept = prune_user_points(ckm, u.points, beams, obs, pick, options.eta);
          if (!rebuild_user(ckm, u, std::move(kept), root, options.weights)) descend_uniform(u, root);
        } else {
          auto kept = prune_user_points(ckm, u.points, beams, obs, std::nullopt, options.eta);
          rebuild_user(ckm, u, std::move(kept), u.tree.root(), options.weights);
        }
      }
    }

    for (const auto& u : users) round.points_after.push_back(u.points.size());
    result.rounds.push_back(std::move(round));
  }

  for (const auto& u : users) result.chosen.push_back(u.tree.resolved_beam());
  return result;
}

}  // namespace ckmbeam
