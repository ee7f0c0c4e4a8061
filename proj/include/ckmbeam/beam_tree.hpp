// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ckmbeam/ckm.hpp"
#include "ckmbeam/position_model.hpp"
#include "ckmbeam/types.hpp"

namespace ckmbeam {

struct WeightOptions {
  double beta = 0.5;       // per-point gain threshold relative to the point's best beam
  int retained_beams = 0;  // cap on survivors per point after thresholding; 0 = no cap
};

/// Beam potentials. Bottom weights come from thresholded point-wise
/// contributions p * G_map; every upper weight is the sum of its two children.
class BeamWeightTable {
 public:
  struct PointEntry {
    std::size_t grid_index = 0;
    double probability = 0.0;
    bool alive = true;
    std::vector<std::pair<int, double>> beams;  // surviving bottom index, p * G_map
  };

  BeamWeightTable() = default;

  /// Table with no point backing, e.g. for hand-built trees.
  static BeamWeightTable from_bottom_weights(std::span<const double> bottom, double beta = 1.0);

  int num_layers() const { return num_layers_; }
  double beta() const { return beta_; }
  double weight(BeamId beam) const;
  std::span<const double> layer_weights(int layer) const;
  /// Sum over layer 1 (equals the bottom-layer sum).
  double total() const;

  bool point_backed() const { return !points_.empty(); }
  std::span<const PointEntry> points() const { return points_; }
  std::size_t alive_points() const;

  /// Thresholded contribution of one point to one bottom beam (0 when the
  /// beam did not survive the threshold or the point was pruned).
  double point_weight(std::size_t slot, int bottom_index) const;

  void kill_point(std::size_t slot) { points_.at(slot).alive = false; }

  /// Re-derives bottom weights from live points (or the base weights), zeroes
  /// everything outside `root`'s subtree and re-applies the layer recursion.
  void rebuild(BeamId root);

  /// Degenerate-update fallback: uniform unit weight on `bottom_indices`,
  /// dropping point backing.
  void reset_uniform(std::span<const int> bottom_indices, BeamId root);

 private:
  friend BeamWeightTable compute_point_weights(const CkmGrid&, std::span<const WeightedPoint>,
                                               const WeightOptions&);

  void propagate_up();

  int num_layers_ = 0;
  double beta_ = 1.0;
  std::vector<std::vector<double>> weights_;  // [layer-1][index-1]
  std::vector<PointEntry> points_;
  std::vector<double> base_bottom_;
};

BeamWeightTable compute_point_weights(const CkmGrid& ckm, std::span<const WeightedPoint> points,
                                      const WeightOptions& options = {});

/// Candidate codewords (positive potential) of the incomplete search tree
/// plus the current root.
class PrunedTree {
 public:
  PrunedTree() = default;

  int num_layers() const { return num_layers_; }
  BeamId root() const { return root_; }

  /// Sorted candidate indices at `layer`.
  std::span<const int> candidates(int layer) const;
  /// Candidates at `layer` descending from `node` (node.layer < layer).
  std::span<const int> candidates_under(BeamId node, int layer) const;
  std::size_t count_under(BeamId node, int layer) const { return candidates_under(node, layer).size(); }

  bool contains(BeamId beam) const;
  std::size_t bottom_count() const { return candidates(num_layers_).size(); }
  bool resolved() const { return bottom_count() == 1; }
  /// The single remaining bottom beam; throws unless resolved().
  BeamId resolved_beam() const;

 private:
  friend PrunedTree candidate_beams(const BeamWeightTable&, BeamId);

  int num_layers_ = 0;
  BeamId root_ = kVirtualRoot;
  std::vector<std::vector<int>> candidates_;
};

/// {(l,n) : w_{l,n} > 0} restricted to `root`'s subtree. Throws
/// DegenerateError when nothing carries weight.
PrunedTree candidate_beams(const BeamWeightTable& table, BeamId root = kVirtualRoot);

/// Feedback update after the UE reported `observed`:
///  (a) `observed` becomes the root and everything outside its subtree drops;
///  (b) points whose map-strongest beam among the probed layer's candidates
///      is not `observed` are pruned (needs `ckm`; skipped when null);
///  (c) weights and candidates are rebuilt.
/// If no weight survives, the previous candidates below `observed` are kept
/// with uniform weight.
void apply_observation(const CkmGrid* ckm, BeamWeightTable& table, PrunedTree& tree,
                       BeamId observed);

/// Map-strongest index among `indices` at `layer` for one grid point. Ties go
/// to the smaller index.
int map_argmax(const CkmGrid& ckm, std::size_t grid_index, int layer, std::span<const int> indices);

}  // namespace ckmbeam
