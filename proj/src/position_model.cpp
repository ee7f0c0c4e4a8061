// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/position_model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace ckmbeam {

PositionPrior::PositionPrior(std::vector<SubRegion> subregions, std::size_t grid_points)
    : subregions_(std::move(subregions)) {
  if (subregions_.empty()) throw std::invalid_argument("position prior needs at least one subregion");
  double total = 0.0;
  for (const auto& r : subregions_) {
    if (r.points.empty()) throw std::invalid_argument("subregion has no grid points");
    if (!(r.prior > 0.0 && r.prior <= 1.0)) throw std::invalid_argument("subregion prior outside (0, 1]");
    if (grid_points > 0) {
      for (auto p : r.points) {
        if (p >= grid_points) throw std::invalid_argument("subregion point outside the CKM grid");
      }
    }
    total += r.prior;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("subregion priors must sum to 1");
  if (!disjoint()) throw std::invalid_argument("subregions overlap");
}

std::size_t PositionPrior::point_count() const {
  std::size_t n = 0;
  for (const auto& r : subregions_) n += r.points.size();
  return n;
}

double PositionPrior::point_probability(std::size_t s, std::size_t m) const {
  if (s >= subregions_.size()) throw std::out_of_range("point_probability: subregion index");
  const auto& r = subregions_[s];
  if (m >= r.points.size()) throw std::out_of_range("point_probability: point index");
  return r.prior / static_cast<double>(r.points.size());
}

std::vector<WeightedPoint> PositionPrior::weighted_points() const {
  std::vector<WeightedPoint> out;
  out.reserve(point_count());
  for (std::size_t s = 0; s < subregions_.size(); ++s) {
    for (std::size_t m = 0; m < subregions_[s].points.size(); ++m)
      out.push_back({subregions_[s].points[m], point_probability(s, m)});
  }
  return out;
}

std::size_t PositionPrior::sample(Rng& rng) const {
  if (subregions_.empty()) throw std::logic_error("sample: empty prior");
  std::size_t s = 0;
  if (subregions_.size() > 1) {
    // Inverse CDF on a uniform draw so results do not depend on the
    // library's discrete_distribution.
    const double u = std::generate_canonical<double, 53>(rng);
    double acc = 0.0;
    s = subregions_.size() - 1;
    for (std::size_t i = 0; i < subregions_.size(); ++i) {
      acc += subregions_[i].prior;
      if (u < acc) {
        s = i;
        break;
      }
    }
  }
  const auto& pts = subregions_[s].points;
  const double v = std::generate_canonical<double, 53>(rng);
  auto m = static_cast<std::size_t>(v * static_cast<double>(pts.size()));
  if (m >= pts.size()) m = pts.size() - 1;
  return pts[m];
}

bool PositionPrior::disjoint() const {
  std::unordered_set<std::size_t> seen;
  for (const auto& r : subregions_) {
    std::unordered_set<std::size_t> local(r.points.begin(), r.points.end());
    for (auto p : local) {
      if (!seen.insert(p).second) return false;
    }
  }
  return true;
}

std::size_t sample_true_position(const PositionPrior& prior, Rng& rng) { return prior.sample(rng); }

}  // namespace ckmbeam
