// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ckmbeam/array_channel.hpp"

namespace ckmbeam {

/// A contiguous area the user may occupy, discretised to grid points.
struct SubRegion {
  std::vector<std::size_t> points;  // grid indices, in the order given
  double prior = 1.0;
};

/// Grid point paired with its probability mass.
struct WeightedPoint {
  std::size_t grid_index = 0;
  double probability = 0.0;
};

/// Prior over disjoint subregions; mass is spread uniformly inside each.
class PositionPrior {
 public:
  PositionPrior() = default;

  /// Validates non-empty regions, priors in (0, 1] summing to one (1e-9),
  /// pairwise disjointness and (when `grid_points` > 0) index bounds.
  explicit PositionPrior(std::vector<SubRegion> subregions, std::size_t grid_points = 0);

  std::size_t subregion_count() const { return subregions_.size(); }
  const SubRegion& subregion(std::size_t s) const { return subregions_.at(s); }
  std::size_t point_count() const;

  /// P_s / N_s.
  double point_probability(std::size_t s, std::size_t m) const;

  /// Every point with its mass, subregion by subregion.
  std::vector<WeightedPoint> weighted_points() const;

  /// Subregion drawn by prior, then a uniform point inside it.
  std::size_t sample(Rng& rng) const;

  bool disjoint() const;

 private:
  std::vector<SubRegion> subregions_;
};

std::size_t sample_true_position(const PositionPrior& prior, Rng& rng);

/// Order-preserving filter; never yields elements outside `current`.
template <class T, class Keep>
std::vector<T> prune_points(std::span<const T> current, Keep&& keep) {
  std::vector<T> out;
  out.reserve(current.size());
  for (const T& p : current) {
    if (keep(p)) out.push_back(p);
  }
  return out;
}

}  // namespace ckmbeam
