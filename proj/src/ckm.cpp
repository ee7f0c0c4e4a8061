// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/ckm.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>

namespace ckmbeam {

GridSpec GridSpec::from_extent(Vec2 origin, double extent_x, double extent_y, double dx,
                               double dy) {
  if (!(dx > 0.0) || !(dy > 0.0)) throw std::invalid_argument("grid spacing must be > 0");
  if (!(extent_x > 0.0) || !(extent_y > 0.0)) throw std::invalid_argument("grid extent must be > 0");
  GridSpec g;
  g.origin = origin;
  g.dx = dx;
  g.dy = dy;
  g.nx = static_cast<std::uint32_t>(std::ceil(extent_x / dx - 1e-9));
  g.ny = static_cast<std::uint32_t>(std::ceil(extent_y / dy - 1e-9));
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw std::invalid_argument("grid spacing must be finite and > 0");
  if (nx == 0 || ny == 0) throw std::invalid_argument("grid must have at least one point");
}

Vec2 GridSpec::point(std::size_t idx) const {
  if (idx >= point_count()) throw std::out_of_range("grid point index out of range");
  const auto ix = idx % nx;
  const auto iy = idx / nx;
  return {origin.x + dx * static_cast<double>(ix), origin.y + dy * static_cast<double>(iy)};
}

namespace {

// Nearest index along one axis; exact half-way ties go to the lower index.
std::uint32_t nearest_axis(double t, std::uint32_t n) {
  const double r = std::ceil(t - 0.5);
  if (!(r > 0.0)) return 0;
  if (r >= static_cast<double>(n - 1)) return n - 1;
  return static_cast<std::uint32_t>(r);
}

}  // namespace

std::size_t GridSpec::nearest(Vec2 p) const {
  const auto ix = nearest_axis((p.x - origin.x) / dx, nx);
  const auto iy = nearest_axis((p.y - origin.y) / dy, ny);
  return index(ix, iy);
}

CkmGrid::CkmGrid(GridSpec grid, int num_antennas, int num_layers)
    : grid_(grid), num_antennas_(num_antennas), num_layers_(num_layers) {
  grid_.validate();
  if (num_layers < 1 || num_layers > 15) throw std::invalid_argument("CkmGrid: bad layer count");
  gains_.assign(codeword_count(num_layers) * grid_.point_count(), 0.0f);
}

void CkmGrid::set_gain(std::size_t point, BeamId beam, float value) {
  if (!is_valid(beam, num_layers_)) throw std::out_of_range("set_gain: invalid beam");
  if (point >= grid_.point_count()) throw std::out_of_range("set_gain: point out of range");
  if (!(value >= 0.0f) || !std::isfinite(value))
    throw std::invalid_argument("set_gain: gains must be finite and >= 0");
  gains_[flat_index(beam) * grid_.point_count() + point] = value;
}

std::span<const float> CkmGrid::layer_map(BeamId beam) const {
  if (!is_valid(beam, num_layers_)) throw std::out_of_range("layer_map: invalid beam");
  return std::span<const float>(gains_).subspan(flat_index(beam) * grid_.point_count(),
                                                grid_.point_count());
}

CkmGrid build_ckm(const Environment& env, const ArrayConfig& array,
                  const HierarchicalCodebook& codebook, const GridSpec& grid,
                  const CkmBuildOptions& options) {
  env.validate();
  array.validate();
  grid.validate();
  if (codebook.num_antennas() != array.num_antennas)
    throw std::invalid_argument("build_ckm: codebook and array sizes differ");
  if (!(options.staleness_sigma_db >= 0.0))
    throw std::invalid_argument("build_ckm: staleness sigma must be >= 0");

  CkmGrid ckm(grid, codebook.num_antennas(), codebook.num_layers());
  const std::size_t np = grid.point_count();
  for (std::size_t p = 0; p < np; ++p) {
    if (distance(grid.point(p), array.bs_position) < 1e-9)
      throw std::invalid_argument("build_ckm: a grid point coincides with the BS");
  }

  for (std::size_t p = 0; p < np; ++p) {
    const CVector h = synthesize_channel(env, array, grid.point(p)).vector(array.num_antennas);
    for (std::size_t f = 0; f < codebook.size(); ++f) {
      const BeamId b = codebook.beam_at(f);
      ckm.set_gain(p, b, static_cast<float>(beam_gain(h, codebook.codeword(b))));
    }
  }

  if (options.staleness_sigma_db > 0.0) {
    Rng rng(options.staleness_seed);
    std::normal_distribution<double> z(0.0, options.staleness_sigma_db);
    for (std::size_t f = 0; f < codebook.size(); ++f) {
      const BeamId b = codebook.beam_at(f);
      for (std::size_t p = 0; p < np; ++p) {
        const double jitter = std::pow(10.0, z(rng) / 20.0);
        ckm.set_gain(p, b, static_cast<float>(ckm.gain(p, b) * jitter));
      }
    }
  }
  return ckm;
}

namespace {

constexpr std::uint8_t kMagic[4] = {'B', 'C', 'K', 'M'};

class Writer {
 public:
  void bytes(const std::uint8_t* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  template <class T>
  void le(T v) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
    const U u = std::bit_cast<U>(v);
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(u >> (8 * i)));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  template <class T>
  T le() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint16_t>>;
    need(sizeof(T));
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(U{in_[pos_ + i]} << (8 * i));
    pos_ += sizeof(T);
    return std::bit_cast<T>(u);
  }
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw FormatError("CKM payload truncated");
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> save_ckm(const CkmGrid& ckm) {
  const GridSpec& g = ckm.grid();
  Writer w;
  w.bytes(kMagic, 4);
  w.le(kCkmFormatVersion);
  w.le(static_cast<std::uint32_t>(ckm.num_antennas()));
  w.le(static_cast<std::uint32_t>(ckm.num_layers()));
  w.le(g.nx);
  w.le(g.ny);
  w.le(g.dx);
  w.le(g.dy);
  w.le(g.origin.x);
  w.le(g.origin.y);
  const std::size_t nc = codeword_count(ckm.num_layers());
  w.le(static_cast<std::uint32_t>(nc));
  for (int l = 1; l <= ckm.num_layers(); ++l) {
    for (int n = 1; n <= (1 << l); ++n) {
      w.le(static_cast<std::uint16_t>(l));
      w.le(static_cast<std::uint16_t>(n));
      for (float v : ckm.layer_map({l, n})) w.le(v);
    }
  }
  return w.take();
}

CkmGrid load_ckm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FormatError("not a CKM file (bad magic)");
  Reader r(bytes.subspan(4));
  const auto version = r.le<std::uint32_t>();
  if (version != kCkmFormatVersion)
    throw FormatError("unsupported CKM format version " + std::to_string(version));
  const auto n_ant = r.le<std::uint32_t>();
  const auto n_layers = r.le<std::uint32_t>();
  GridSpec g;
  g.nx = r.le<std::uint32_t>();
  g.ny = r.le<std::uint32_t>();
  g.dx = r.le<double>();
  g.dy = r.le<double>();
  g.origin.x = r.le<double>();
  g.origin.y = r.le<double>();
  const auto nc = r.le<std::uint32_t>();

  if (n_layers < 1 || n_layers > 15 || n_ant < 1 ||
      static_cast<int>(n_layers) != layer_count(static_cast<int>(n_ant)))
    throw FormatError("CKM header: inconsistent antenna/layer counts");
  if (g.nx == 0 || g.ny == 0 || !(g.dx > 0.0) || !(g.dy > 0.0))
    throw FormatError("CKM header: invalid grid");
  if (nc != codeword_count(static_cast<int>(n_layers)))
    throw FormatError("CKM header: codeword count does not match layer count");
  const std::size_t np = g.point_count();
  const std::size_t record = 4 + 4 * np;
  if (r.remaining() != record * nc)
    throw FormatError("CKM payload length does not match declared dimensions");

  CkmGrid ckm(g, static_cast<int>(n_ant), static_cast<int>(n_layers));
  std::vector<bool> seen(nc, false);
  for (std::uint32_t c = 0; c < nc; ++c) {
    const BeamId b{r.le<std::uint16_t>(), r.le<std::uint16_t>()};
    if (!is_valid(b, static_cast<int>(n_layers))) throw FormatError("CKM record: invalid beam id");
    const std::size_t f = flat_index(b);
    if (seen[f]) throw FormatError("CKM record: duplicate beam " + to_string(b));
    seen[f] = true;
    for (std::size_t p = 0; p < np; ++p) {
      const float v = r.le<float>();
      if (!(v >= 0.0f) || !std::isfinite(v)) throw FormatError("CKM record: invalid gain value");
      ckm.set_gain(p, b, v);
    }
  }
  return ckm;
}

void save_ckm_file(const CkmGrid& ckm, const std::filesystem::path& path) {
  const auto bytes = save_ckm(ckm);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

CkmGrid load_ckm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_ckm(bytes);
}

}  // namespace ckmbeam
