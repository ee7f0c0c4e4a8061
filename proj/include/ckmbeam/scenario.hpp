// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ckmbeam/array_channel.hpp"
#include "ckmbeam/beam_tree.hpp"
#include "ckmbeam/ckm.hpp"
#include "ckmbeam/codebook.hpp"
#include "ckmbeam/position_model.hpp"

namespace ckmbeam {

enum class Algorithm { alg1, alg2, alg3, baseline_hier, baseline_exhaustive, perfect_csi };

const char* to_string(Algorithm a);
/// Accepts the CSV tags: alg1, alg2, alg3, baseline-hier, baseline-exhaustive, perfect-csi.
Algorithm parse_algorithm(const std::string& tag);

/// How a nominal SNR turns into a noise level.
enum class SnrReference {
  /// sigma^2 = (|h|^2 / N) / snr: the SNR a single antenna would see.
  rx_per_antenna,
  /// sigma^2 = 1 / snr against the absolute channel scale.
  transmit,
};

const char* to_string(SnrReference r);
SnrReference parse_snr_reference(const std::string& tag);

/// Axis-aligned box; covers every grid point with min <= p <= max.
struct RectRegion {
  Vec2 min{};
  Vec2 max{};
};

struct SubRegionSpec {
  std::optional<RectRegion> rect;
  std::vector<Vec2> points;  // snapped to the nearest grid point
  double prior = 1.0;
};

struct UserSpec {
  std::vector<SubRegionSpec> subregions;
};

struct RandomScatterers {
  std::size_t count = 0;
  Vec2 lo{};
  Vec2 hi{};
  double reflection_min = 0.2;
  double reflection_max = 0.6;
};

struct ScenarioConfig {
  ArrayConfig array;
  Vec2 grid_origin{};
  Vec2 grid_extent{64.0, 64.0};
  Vec2 grid_spacing{1.0, 1.0};
  Environment environment;
  RandomScatterers random_scatterers;
  std::vector<UserSpec> users;
  std::vector<double> snr_db{10.0};  // +inf means noiseless
  double beta = 0.5;
  double eta = 0.9;
  int retained_beams = 0;
  int trials = 1000;
  std::vector<Algorithm> algorithms{Algorithm::alg1, Algorithm::alg2, Algorithm::baseline_hier};
  std::uint64_t seed = 1;
  double ckm_staleness_sigma_db = 0.0;
  SnrReference snr_reference = SnrReference::rx_per_antenna;
  int workers = 0;  // 0 = hardware concurrency

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// Parses a JSON scenario. Unknown keys are rejected. Throws FormatError on
/// malformed JSON or wrong types, std::invalid_argument on bad values.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

/// A validated configuration with everything derived from it.
class Scenario {
 public:
  explicit Scenario(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const HierarchicalCodebook& codebook() const { return codebook_; }
  const Environment& environment() const { return environment_; }
  const GridSpec& grid() const { return grid_; }
  const std::vector<PositionPrior>& priors() const { return priors_; }
  std::size_t user_count() const { return priors_.size(); }

  WeightOptions weight_options() const { return {config_.beta, config_.retained_beams}; }

  CkmGrid build_map() const;

  /// Noise std for one user's channel at the given SNR (0 when infinite).
  double noise_std(std::span<const cdouble> channel, double snr_db) const;

 private:
  ScenarioConfig config_;
  HierarchicalCodebook codebook_;
  Environment environment_;
  GridSpec grid_;
  std::vector<PositionPrior> priors_;
};

/// Grid indices covered by a subregion spec.
std::vector<std::size_t> region_points(const GridSpec& grid, const SubRegionSpec& spec);

}  // namespace ckmbeam
