// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "ckmbeam/types.hpp"

namespace ckmbeam {

/// Half-open interval [lo, hi) in sine space.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// [-1 + (n-1)/2^(l-1), -1 + n/2^(l-1)).
Interval beam_support(BeamId beam);

enum class Direction { parent, left_child, right_child };

bool is_valid(BeamId beam, int num_layers);

/// Parent of (l,n) is (l-1, ceil(n/2)); children are (l+1, 2n-1), (l+1, 2n).
/// Throws std::out_of_range when the result would leave layers [1, num_layers].
BeamId navigate(BeamId beam, Direction dir, int num_layers);

/// Ancestor of `beam` at `layer` (<= beam.layer). Layer 0 gives the virtual root.
BeamId ancestor_at(BeamId beam, int layer);

/// True when `node` lies in the subtree rooted at `root` (inclusive).
bool in_subtree(BeamId node, BeamId root);

/// Index range [first, last] of the layer-`layer` descendants of `root`.
std::pair<int, int> descendant_range(BeamId root, int layer);

/// Layer l holds 2^l codewords; the bottom layer is the N-point DFT basis
/// steered to the centres of the bottom supports. Wider codewords are the
/// power-normalised sums of the DFT columns inside their support.
class HierarchicalCodebook {
 public:
  explicit HierarchicalCodebook(int num_antennas);

  int num_antennas() const { return num_antennas_; }
  int num_layers() const { return num_layers_; }
  std::size_t size() const { return codewords_.size(); }

  std::span<const cdouble> codeword(BeamId beam) const;

  /// Layer-major position of `beam`: layer 1 first, index ascending.
  std::size_t flat_index(BeamId beam) const;
  BeamId beam_at(std::size_t flat) const;

  /// Bottom-layer DFT angle of column n (1-based).
  double bottom_angle(int index) const;

 private:
  int num_antennas_;
  int num_layers_;
  std::vector<CVector> codewords_;
};

HierarchicalCodebook build_codebook(int num_antennas);

/// ceil(log2 n) for n >= 1.
int layer_count(int num_antennas);

/// 2 + 4 + ... + 2^L.
inline std::size_t codeword_count(int num_layers) {
  return (std::size_t{1} << (num_layers + 1)) - 2;
}

inline std::size_t flat_index(BeamId b) {
  return (std::size_t{1} << b.layer) - 2 + static_cast<std::size_t>(b.index - 1);
}

}  // namespace ckmbeam
