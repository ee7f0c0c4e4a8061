// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/codebook.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ckmbeam/array_channel.hpp"

namespace ckmbeam {

Interval beam_support(BeamId b) {
  const double width = std::ldexp(1.0, 1 - b.layer);  // 1 / 2^(l-1)
  return {-1.0 + (b.index - 1) * width, -1.0 + b.index * width};
}

bool is_valid(BeamId b, int num_layers) {
  return b.layer >= 1 && b.layer <= num_layers && b.index >= 1 && b.index <= (1 << b.layer);
}

BeamId navigate(BeamId b, Direction dir, int num_layers) {
  if (!is_valid(b, num_layers)) throw std::out_of_range("navigate: invalid beam " + to_string(b));
  switch (dir) {
    case Direction::parent:
      if (b.layer == 1) throw std::out_of_range("navigate: layer-1 beams have no parent");
      return {b.layer - 1, (b.index + 1) / 2};
    case Direction::left_child:
    case Direction::right_child:
      if (b.layer == num_layers) throw std::out_of_range("navigate: bottom beams have no children");
      return {b.layer + 1, dir == Direction::left_child ? 2 * b.index - 1 : 2 * b.index};
  }
  throw std::logic_error("navigate: bad direction");
}

BeamId ancestor_at(BeamId b, int layer) {
  if (layer > b.layer || layer < 0) throw std::out_of_range("ancestor_at: bad layer");
  if (layer == 0) return kVirtualRoot;
  const int shift = b.layer - layer;
  return {layer, ((b.index - 1) >> shift) + 1};
}

bool in_subtree(BeamId node, BeamId root) {
  if (root.layer == 0) return true;
  if (node.layer < root.layer) return false;
  return ancestor_at(node, root.layer) == root;
}

std::pair<int, int> descendant_range(BeamId root, int layer) {
  if (root.layer == 0) return {1, 1 << layer};
  const int shift = layer - root.layer;
  if (shift < 0) throw std::out_of_range("descendant_range: layer above root");
  return {((root.index - 1) << shift) + 1, root.index << shift};
}

int layer_count(int n) {
  if (n < 1) throw std::invalid_argument("layer_count: n must be >= 1");
  return static_cast<int>(std::bit_width(static_cast<unsigned>(n - 1)));
}

HierarchicalCodebook::HierarchicalCodebook(int num_antennas)
    : num_antennas_(num_antennas), num_layers_(0) {
  if (num_antennas < 4 || !std::has_single_bit(static_cast<unsigned>(num_antennas)))
    throw std::invalid_argument("build_codebook: num_antennas must be a power of two >= 4");
  num_layers_ = layer_count(num_antennas);

  const auto n_ant = static_cast<std::size_t>(num_antennas);
  std::vector<CVector> dft;
  dft.reserve(n_ant);
  // Columns are phase-referenced to the array centre so that neighbouring
  // columns add coherently inside a wide beam.
  const double centre = 0.5 * (num_antennas - 1);
  for (int n = 1; n <= num_antennas; ++n) {
    CVector col = steering_vector(bottom_angle(n), num_antennas);
    const cdouble shift = std::polar(1.0, std::numbers::pi * bottom_angle(n) * centre);
    for (auto& x : col) x *= shift;
    dft.push_back(std::move(col));
  }

  codewords_.resize(codeword_count(num_layers_));
  for (int l = 1; l <= num_layers_; ++l) {
    for (int n = 1; n <= (1 << l); ++n) {
      const auto [first, last] = descendant_range({l, n}, num_layers_);
      CVector w(n_ant, cdouble{0.0, 0.0});
      for (int c = first; c <= last; ++c) {
        for (std::size_t m = 0; m < n_ant; ++m) w[m] += dft[static_cast<std::size_t>(c - 1)][m];
      }
      double norm = 0.0;
      for (const auto& x : w) norm += std::norm(x);
      norm = std::sqrt(norm);
      for (auto& x : w) x /= norm;
      codewords_[ckmbeam::flat_index({l, n})] = std::move(w);
    }
  }
}

double HierarchicalCodebook::bottom_angle(int index) const {
  return -1.0 + (2.0 * index - 1.0) / num_antennas_;
}

std::span<const cdouble> HierarchicalCodebook::codeword(BeamId b) const {
  if (!is_valid(b, num_layers_)) throw std::out_of_range("codeword: invalid beam " + to_string(b));
  return codewords_[ckmbeam::flat_index(b)];
}

std::size_t HierarchicalCodebook::flat_index(BeamId b) const {
  if (!is_valid(b, num_layers_)) throw std::out_of_range("flat_index: invalid beam " + to_string(b));
  return ckmbeam::flat_index(b);
}

BeamId HierarchicalCodebook::beam_at(std::size_t flat) const {
  if (flat >= codewords_.size()) throw std::out_of_range("beam_at: index out of range");
  int l = 1;
  while (flat >= (std::size_t{1} << (l + 1)) - 2) ++l;
  return {l, static_cast<int>(flat - ((std::size_t{1} << l) - 2)) + 1};
}

HierarchicalCodebook build_codebook(int num_antennas) { return HierarchicalCodebook(num_antennas); }

}  // namespace ckmbeam
