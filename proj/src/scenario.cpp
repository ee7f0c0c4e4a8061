// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ckmbeam {

using nlohmann::json;

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::alg1: return "alg1";
    case Algorithm::alg2: return "alg2";
    case Algorithm::alg3: return "alg3";
    case Algorithm::baseline_hier: return "baseline-hier";
    case Algorithm::baseline_exhaustive: return "baseline-exhaustive";
    case Algorithm::perfect_csi: return "perfect-csi";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& tag) {
  for (auto a : {Algorithm::alg1, Algorithm::alg2, Algorithm::alg3, Algorithm::baseline_hier,
                 Algorithm::baseline_exhaustive, Algorithm::perfect_csi}) {
    if (tag == to_string(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + tag + "'");
}

const char* to_string(SnrReference r) {
  return r == SnrReference::transmit ? "transmit" : "rx_per_antenna";
}

SnrReference parse_snr_reference(const std::string& tag) {
  if (tag == "rx_per_antenna") return SnrReference::rx_per_antenna;
  if (tag == "transmit") return SnrReference::transmit;
  throw std::invalid_argument("unknown snr_reference '" + tag + "'");
}

void ScenarioConfig::validate() const {
  array.validate();
  if (array.num_antennas < 4) throw std::invalid_argument("num_antennas must be >= 4");
  environment.validate();
  if (!(grid_extent.x > 0.0) || !(grid_extent.y > 0.0))
    throw std::invalid_argument("grid extent must be > 0");
  if (!(grid_spacing.x > 0.0) || !(grid_spacing.y > 0.0))
    throw std::invalid_argument("grid spacing must be > 0");
  if (users.empty()) throw std::invalid_argument("scenario needs at least one user");
  if (snr_db.empty()) throw std::invalid_argument("snr_db list must not be empty");
  for (double s : snr_db) {
    if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
      throw std::invalid_argument("snr_db values must be finite or +inf");
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0, 1]");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must be in (0, 1]");
  if (retained_beams < 0) throw std::invalid_argument("retained_beams must be >= 0");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (algorithms.empty()) throw std::invalid_argument("algorithm list must not be empty");
  if (!(ckm_staleness_sigma_db >= 0.0)) throw std::invalid_argument("staleness sigma must be >= 0");
  if (workers < 0) throw std::invalid_argument("workers must be >= 0");
  if (random_scatterers.count > 0 &&
      !(random_scatterers.reflection_min >= 0.0 &&
        random_scatterers.reflection_min <= random_scatterers.reflection_max &&
        random_scatterers.reflection_max <= 1.0))
    throw std::invalid_argument("random scatterer reflections must satisfy 0 <= min <= max <= 1");
}

namespace {

void only_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  if (!obj.is_object()) throw FormatError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return key == k; }))
      throw FormatError(std::string(where) + ": unknown key '" + key + "'");
  }
}

Vec2 to_vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw FormatError(std::string(what) + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

double to_snr(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string() && (j == "inf" || j == "+inf")) return std::numeric_limits<double>::infinity();
  throw FormatError("snr_db: expected numbers or \"inf\"");
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

void parse_environment(const json& j, ScenarioConfig& c) {
  only_keys(j,
            {"scatterers", "obstacles", "random_scatterers", "seed", "max_paths",
             "pathloss_exponent", "blockage_loss_db"},
            "environment");
  auto& env = c.environment;
  if (j.contains("scatterers")) {
    for (const auto& s : j.at("scatterers")) {
      only_keys(s, {"position", "reflection"}, "scatterer");
      Scatterer sc;
      sc.position = to_vec2(s.at("position"), "scatterer.position");
      read(s, "reflection", sc.reflection);
      env.scatterers.push_back(sc);
    }
  }
  if (j.contains("obstacles")) {
    for (const auto& o : j.at("obstacles")) {
      only_keys(o, {"from", "to"}, "obstacle");
      env.obstacles.push_back({to_vec2(o.at("from"), "obstacle.from"), to_vec2(o.at("to"), "obstacle.to")});
    }
  }
  if (j.contains("random_scatterers")) {
    const auto& r = j.at("random_scatterers");
    only_keys(r, {"count", "min", "max", "reflection"}, "random_scatterers");
    auto& rs = c.random_scatterers;
    read(r, "count", rs.count);
    rs.lo = to_vec2(r.at("min"), "random_scatterers.min");
    rs.hi = to_vec2(r.at("max"), "random_scatterers.max");
    if (r.contains("reflection")) {
      const Vec2 refl = to_vec2(r.at("reflection"), "random_scatterers.reflection");
      rs.reflection_min = refl.x;
      rs.reflection_max = refl.y;
    }
  }
  read(j, "seed", env.rng_seed);
  read(j, "max_paths", env.max_paths);
  read(j, "pathloss_exponent", env.pathloss_exponent);
  read(j, "blockage_loss_db", env.blockage_loss_db);
}

UserSpec parse_user(const json& j) {
  only_keys(j, {"subregions"}, "user");
  UserSpec u;
  for (const auto& s : j.at("subregions")) {
    only_keys(s, {"rect", "points", "prior"}, "subregion");
    SubRegionSpec spec;
    read(s, "prior", spec.prior);
    if (s.contains("rect") == s.contains("points"))
      throw FormatError("subregion: give exactly one of 'rect' or 'points'");
    if (s.contains("rect")) {
      const auto& r = s.at("rect");
      only_keys(r, {"min", "max"}, "rect");
      spec.rect = RectRegion{to_vec2(r.at("min"), "rect.min"), to_vec2(r.at("max"), "rect.max")};
    } else {
      for (const auto& p : s.at("points")) spec.points.push_back(to_vec2(p, "subregion point"));
    }
    u.subregions.push_back(std::move(spec));
  }
  return u;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("scenario JSON: ") + e.what());
  }

  ScenarioConfig c;
  try {
    only_keys(root,
              {"array", "grid", "environment", "users", "snr_db", "beta", "eta", "retained_beams",
               "trials", "algorithms", "seed", "ckm_staleness_sigma_db", "snr_reference", "workers"},
              "scenario");
    if (root.contains("array")) {
      const auto& a = root.at("array");
      only_keys(a, {"num_antennas", "carrier_frequency_hz", "bs_position"}, "array");
      read(a, "num_antennas", c.array.num_antennas);
      read(a, "carrier_frequency_hz", c.array.carrier_frequency_hz);
      if (a.contains("bs_position")) c.array.bs_position = to_vec2(a.at("bs_position"), "bs_position");
    }
    if (root.contains("grid")) {
      const auto& g = root.at("grid");
      only_keys(g, {"origin", "extent", "spacing"}, "grid");
      if (g.contains("origin")) c.grid_origin = to_vec2(g.at("origin"), "grid.origin");
      if (g.contains("extent")) c.grid_extent = to_vec2(g.at("extent"), "grid.extent");
      if (g.contains("spacing")) c.grid_spacing = to_vec2(g.at("spacing"), "grid.spacing");
    }
    if (root.contains("environment")) parse_environment(root.at("environment"), c);
    if (root.contains("users")) {
      for (const auto& u : root.at("users")) c.users.push_back(parse_user(u));
    }
    if (root.contains("snr_db")) {
      c.snr_db.clear();
      for (const auto& s : root.at("snr_db")) c.snr_db.push_back(to_snr(s));
    }
    read(root, "beta", c.beta);
    read(root, "eta", c.eta);
    read(root, "retained_beams", c.retained_beams);
    read(root, "trials", c.trials);
    if (root.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : root.at("algorithms")) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    read(root, "seed", c.seed);
    read(root, "ckm_staleness_sigma_db", c.ckm_staleness_sigma_db);
    if (root.contains("snr_reference"))
      c.snr_reference = parse_snr_reference(root.at("snr_reference").get<std::string>());
    read(root, "workers", c.workers);
  } catch (const json::exception& e) {
    throw FormatError(std::string("scenario JSON: ") + e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::vector<std::size_t> region_points(const GridSpec& grid, const SubRegionSpec& spec) {
  std::vector<std::size_t> out;
  if (spec.rect) {
    const auto& r = *spec.rect;
    if (!(r.min.x <= r.max.x) || !(r.min.y <= r.max.y))
      throw std::invalid_argument("rect subregion: min must not exceed max");
    for (std::size_t i = 0; i < grid.point_count(); ++i) {
      const Vec2 p = grid.point(i);
      if (p.x >= r.min.x && p.x <= r.max.x && p.y >= r.min.y && p.y <= r.max.y) out.push_back(i);
    }
  } else {
    const Vec2 last = grid.point(grid.point_count() - 1);
    std::set<std::size_t> seen;
    for (const Vec2 p : spec.points) {
      if (p.x < grid.origin.x - grid.dx / 2 || p.y < grid.origin.y - grid.dy / 2 ||
          p.x > last.x + grid.dx / 2 || p.y > last.y + grid.dy / 2)
        throw std::invalid_argument("subregion point lies outside the grid");
      const auto idx = grid.nearest(p);
      if (seen.insert(idx).second) out.push_back(idx);
    }
  }
  if (out.empty()) throw std::invalid_argument("subregion covers no grid points");
  return out;
}

Scenario::Scenario(ScenarioConfig config)
    : config_(std::move(config)), codebook_((config_.validate(), config_.array.num_antennas)) {
  grid_ = GridSpec::from_extent(config_.grid_origin, config_.grid_extent.x, config_.grid_extent.y,
                                config_.grid_spacing.x, config_.grid_spacing.y);
  environment_ = config_.environment;
  const auto& rs = config_.random_scatterers;
  if (rs.count > 0) {
    auto extra = random_scatterers(rs.count, rs.lo, rs.hi, rs.reflection_min, rs.reflection_max,
                                   environment_.rng_seed ^ 0x5ca77e7ull);
    environment_.scatterers.insert(environment_.scatterers.end(), extra.begin(), extra.end());
  }
  for (const auto& u : config_.users) {
    std::vector<SubRegion> regions;
    for (const auto& s : u.subregions) regions.push_back({region_points(grid_, s), s.prior});
    priors_.emplace_back(std::move(regions), grid_.point_count());
  }
}

CkmGrid Scenario::build_map() const {
  CkmBuildOptions opts;
  opts.staleness_sigma_db = config_.ckm_staleness_sigma_db;
  opts.staleness_seed = config_.seed ^ 0x57a1e5ull;
  return build_ckm(environment_, config_.array, codebook_, grid_, opts);
}

double Scenario::noise_std(std::span<const cdouble> channel, double snr_db) const {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  const double snr = std::pow(10.0, snr_db / 10.0);
  double power = 1.0;
  if (config_.snr_reference == SnrReference::rx_per_antenna) {
    power = 0.0;
    for (const auto& c : channel) power += std::norm(c);
    power /= static_cast<double>(channel.size());
  }
  return std::sqrt(power / snr);
}

}  // namespace ckmbeam
