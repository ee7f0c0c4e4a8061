// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/array_channel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ckmbeam {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from a hashed key.
double unit_hash(std::uint64_t seed, std::uint64_t key) {
  return static_cast<double>(splitmix64(seed ^ splitmix64(key)) >> 11) * 0x1.0p-53;
}

double orient(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double leg_attenuation(const Environment& env, Vec2 p, Vec2 q) {
  int hits = 0;
  for (const auto& o : env.obstacles) {
    if (crosses(o, p, q)) ++hits;
  }
  return hits == 0 ? 1.0 : std::pow(10.0, -env.blockage_loss_db * hits / 20.0);
}

}  // namespace

double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string to_string(BeamId b) {
  return "f(" + std::to_string(b.layer) + "," + std::to_string(b.index) + ")";
}

void ArrayConfig::validate() const {
  if (num_antennas < 1 || !std::has_single_bit(static_cast<unsigned>(num_antennas)))
    throw std::invalid_argument("num_antennas must be a power of two");
  if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
    throw std::invalid_argument("carrier frequency must be positive");
}

void Environment::validate() const {
  if (max_paths < 1) throw std::invalid_argument("max_paths must be >= 1");
  if (!(pathloss_exponent > 0.0)) throw std::invalid_argument("pathloss_exponent must be > 0");
  if (!(blockage_loss_db >= 0.0)) throw std::invalid_argument("blockage_loss_db must be >= 0");
  for (const auto& s : scatterers) {
    if (!(std::abs(s.reflection) <= 1.0))
      throw std::invalid_argument("scatterer reflection magnitude must be <= 1");
  }
}

CVector ChannelRealization::vector(int num_antennas) const {
  CVector h(static_cast<std::size_t>(num_antennas), cdouble{0.0, 0.0});
  for (const auto& p : paths) {
    const CVector a = steering_vector(p.spatial_angle, num_antennas);
    for (std::size_t m = 0; m < h.size(); ++m) h[m] += p.complex_gain * a[m];
  }
  return h;
}

CVector steering_vector(double angle, int num_antennas) {
  if (num_antennas < 1) throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
  if (!(angle >= -1.0 && angle < 1.0))
    throw std::invalid_argument("steering_vector: angle outside [-1, 1)");
  CVector a(static_cast<std::size_t>(num_antennas));
  for (int m = 0; m < num_antennas; ++m) a[m] = std::polar(1.0, -kPi * angle * m);
  return a;
}

double spatial_angle(Vec2 from, Vec2 to) {
  const double d = distance(from, to);
  if (!(d > 0.0)) throw std::invalid_argument("spatial_angle: coincident points");
  double s = (to.x - from.x) / d;
  if (s >= 1.0) s -= 2.0;  // endfire wraps onto -1
  return std::clamp(s, -1.0, std::nextafter(1.0, 0.0));
}

bool crosses(const Obstacle& o, Vec2 p, Vec2 q) {
  const double d1 = orient(o.from, o.to, p);
  const double d2 = orient(o.from, o.to, q);
  const double d3 = orient(p, q, o.from);
  const double d4 = orient(p, q, o.to);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

ChannelRealization synthesize_channel(const Environment& env, const ArrayConfig& array,
                                      Vec2 position) {
  const Vec2 bs = array.bs_position;
  const double d_los = distance(bs, position);
  if (!(d_los > 1e-9)) throw std::invalid_argument("synthesize_channel: position coincides with BS");

  const double lambda = array.wavelength();
  const double k0 = 2.0 * kPi / lambda;
  const double scale = lambda / (4.0 * kPi);

  ChannelRealization ch;
  ch.receiver_position = position;

  {
    const double mag = scale * std::pow(d_los, -env.pathloss_exponent) *
                       leg_attenuation(env, bs, position);
    ch.paths.push_back({std::polar(mag, -k0 * d_los), spatial_angle(bs, position), true});
  }

  for (std::size_t i = 0; i < env.scatterers.size(); ++i) {
    const Scatterer& s = env.scatterers[i];
    const double d1 = distance(bs, s.position);
    const double d2 = distance(s.position, position);
    if (d1 < 1e-9 || d2 < 1e-9) continue;
    const double len = d1 + d2;
    const double mag = scale * std::pow(len, -env.pathloss_exponent) * std::abs(s.reflection) *
                       leg_attenuation(env, bs, s.position) *
                       leg_attenuation(env, s.position, position);
    if (!(mag > 0.0)) continue;
    const double phase = 2.0 * kPi * unit_hash(env.rng_seed, i);
    ch.paths.push_back({std::polar(mag, phase - k0 * len), spatial_angle(bs, s.position), false});
  }

  std::stable_sort(ch.paths.begin(), ch.paths.end(), [](const auto& a, const auto& b) {
    return std::abs(a.complex_gain) > std::abs(b.complex_gain);
  });
  if (ch.paths.size() > static_cast<std::size_t>(env.max_paths))
    ch.paths.resize(static_cast<std::size_t>(env.max_paths));
  return ch;
}

std::vector<Scatterer> random_scatterers(std::size_t count, Vec2 lo, Vec2 hi, double refl_min,
                                         double refl_max, std::uint64_t seed) {
  std::vector<Scatterer> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = unit_hash(seed, 3 * i + 0x51);
    const double v = unit_hash(seed, 3 * i + 0x52);
    const double r = unit_hash(seed, 3 * i + 0x53);
    out.push_back({{lo.x + u * (hi.x - lo.x), lo.y + v * (hi.y - lo.y)},
                   refl_min + r * (refl_max - refl_min)});
  }
  return out;
}

double beam_gain(std::span<const cdouble> channel, std::span<const cdouble> codeword) {
  if (channel.size() != codeword.size()) throw std::invalid_argument("beam_gain: dimension mismatch");
  cdouble acc{0.0, 0.0};
  for (std::size_t m = 0; m < channel.size(); ++m) acc += std::conj(channel[m]) * codeword[m];
  return std::abs(acc);
}

double probe(std::span<const cdouble> channel, std::span<const cdouble> codeword,
             double noise_std, Rng& rng) {
  if (channel.size() != codeword.size()) throw std::invalid_argument("probe: dimension mismatch");
  if (!(noise_std >= 0.0)) throw std::invalid_argument("probe: noise_std must be >= 0");
  cdouble acc{0.0, 0.0};
  for (std::size_t m = 0; m < channel.size(); ++m) acc += std::conj(channel[m]) * codeword[m];
  if (noise_std > 0.0) {
    std::normal_distribution<double> n(0.0, noise_std / std::numbers::sqrt2);
    const double re = n(rng);
    const double im = n(rng);
    acc += cdouble{re, im};
  }
  return std::abs(acc);
}

double probe(const ChannelRealization& channel, std::span<const cdouble> codeword,
             double noise_std, Rng& rng) {
  const CVector h = channel.vector(static_cast<int>(codeword.size()));
  return probe(h, codeword, noise_std, rng);
}

}  // namespace ckmbeam
