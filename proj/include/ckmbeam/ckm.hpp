// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ckmbeam/array_channel.hpp"
#include "ckmbeam/codebook.hpp"
#include "ckmbeam/types.hpp"

namespace ckmbeam {

/// Uniform grid over the map area. Point (ix, iy) sits at
/// origin + (ix*dx, iy*dy); points are numbered row-major, iy*nx + ix.
struct GridSpec {
  Vec2 origin{};
  std::uint32_t nx = 1;
  std::uint32_t ny = 1;
  double dx = 1.0;
  double dy = 1.0;

  /// nx = ceil(X/dx), ny = ceil(Y/dy).
  static GridSpec from_extent(Vec2 origin, double extent_x, double extent_y, double dx, double dy);

  std::size_t point_count() const { return std::size_t{nx} * ny; }
  std::size_t index(std::uint32_t ix, std::uint32_t iy) const { return std::size_t{iy} * nx + ix; }
  Vec2 point(std::size_t idx) const;

  /// Nearest grid point; ties resolve to the smaller row-major index and
  /// positions outside the area snap to the boundary.
  std::size_t nearest(Vec2 p) const;
  Vec2 snap(Vec2 p) const { return point(nearest(p)); }

  void validate() const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct CkmBuildOptions {
  /// Log-normal gain jitter (dB std) emulating a stale map. 0 disables.
  double staleness_sigma_db = 0.0;
  std::uint64_t staleness_seed = 0;
};

/// Per-codeword gain magnitudes |h^H f| over every grid point.
class CkmGrid {
 public:
  CkmGrid() = default;
  CkmGrid(GridSpec grid, int num_antennas, int num_layers);

  const GridSpec& grid() const { return grid_; }
  int num_antennas() const { return num_antennas_; }
  int num_layers() const { return num_layers_; }
  std::size_t point_count() const { return grid_.point_count(); }

  float gain(std::size_t point, BeamId beam) const {
    return gains_[flat_index(beam) * grid_.point_count() + point];
  }
  void set_gain(std::size_t point, BeamId beam, float value);

  /// Gains for one codeword over all points, row-major.
  std::span<const float> layer_map(BeamId beam) const;

  /// Nearest-grid-point retrieval.
  float lookup_gain(Vec2 position, BeamId beam) const {
    return gain(grid_.nearest(position), beam);
  }

  const std::vector<float>& raw() const { return gains_; }
  friend bool operator==(const CkmGrid&, const CkmGrid&) = default;

 private:
  GridSpec grid_{};
  int num_antennas_ = 0;
  int num_layers_ = 0;
  std::vector<float> gains_;  // codeword-major, layer order of flat_index()
};

CkmGrid build_ckm(const Environment& env, const ArrayConfig& array,
                  const HierarchicalCodebook& codebook, const GridSpec& grid,
                  const CkmBuildOptions& options = {});

inline constexpr std::uint32_t kCkmFormatVersion = 1;

std::vector<std::uint8_t> save_ckm(const CkmGrid& ckm);
CkmGrid load_ckm(std::span<const std::uint8_t> bytes);

void save_ckm_file(const CkmGrid& ckm, const std::filesystem::path& path);
CkmGrid load_ckm_file(const std::filesystem::path& path);

}  // namespace ckmbeam
