// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ckmbeam/types.hpp"

namespace ckmbeam {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Half-wavelength ULA laid out along the x axis at the BS position.
/// Broadside points along +/-y.
struct ArrayConfig {
  int num_antennas = 32;
  double carrier_frequency_hz = 80e9;
  Vec2 bs_position{};

  double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
  double antenna_spacing() const { return wavelength() / 2.0; }
  void validate() const;
};

struct PropagationPath {
  cdouble complex_gain;
  double spatial_angle = 0.0;  // sine of the departure angle, in [-1, 1)
  bool line_of_sight = false;
};

struct ChannelRealization {
  std::vector<PropagationPath> paths;
  Vec2 receiver_position{};

  /// h = sum_i g_i a(theta_i).
  CVector vector(int num_antennas) const;
};

struct Scatterer {
  Vec2 position{};
  double reflection = 0.5;  // magnitude, <= 1
};

/// Segment that attenuates any ray leg crossing it.
struct Obstacle {
  Vec2 from{};
  Vec2 to{};
};

struct Environment {
  std::vector<Scatterer> scatterers;
  std::vector<Obstacle> obstacles;
  int max_paths = 4;
  double pathloss_exponent = 1.0;  // on amplitude
  double blockage_loss_db = 30.0;  // per obstacle crossing
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// a(theta)_m = exp(-j*pi*theta*m), m = 0..n-1.
CVector steering_vector(double angle, int num_antennas);

/// Spatial angle of the direction from `from` to `to` for an x-axis ULA,
/// wrapped into [-1, 1).
double spatial_angle(Vec2 from, Vec2 to);

/// True when segment [p, q] properly intersects the obstacle.
bool crosses(const Obstacle& obstacle, Vec2 p, Vec2 q);

/// LoS plus one single-bounce path per scatterer, keeping the
/// `env.max_paths` strongest. Pure in (env, array, position).
ChannelRealization synthesize_channel(const Environment& env, const ArrayConfig& array,
                                      Vec2 position);

/// Uniformly placed scatterers inside [lo, hi] with reflection magnitudes in
/// [refl_min, refl_max].
std::vector<Scatterer> random_scatterers(std::size_t count, Vec2 lo, Vec2 hi, double refl_min,
                                         double refl_max, std::uint64_t seed);

using Rng = std::mt19937_64;

/// |h^H f + n| with n ~ CN(0, noise_std^2) and a unit-power symbol.
double probe(std::span<const cdouble> channel, std::span<const cdouble> codeword,
             double noise_std, Rng& rng);
double probe(const ChannelRealization& channel, std::span<const cdouble> codeword,
             double noise_std, Rng& rng);

/// |h^H f| without noise.
double beam_gain(std::span<const cdouble> channel, std::span<const cdouble> codeword);

}  // namespace ckmbeam
