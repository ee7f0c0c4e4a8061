#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "ckmbeam/array_channel.hpp"

namespace fixtures {

ToyTree toy_tree(std::vector<double> bottom_weights) {
  ToyTree t;
  t.table = BeamWeightTable::from_bottom_weights(bottom_weights);
  t.tree = candidate_beams(t.table);
  return t;
}

BeamWeightTable unit_table(int num_antennas, const std::set<int>& bottom) {
  std::vector<double> w(static_cast<std::size_t>(num_antennas), 0.0);
  for (int n : bottom) w.at(static_cast<std::size_t>(n - 1)) = 1.0;
  return BeamWeightTable::from_bottom_weights(w);
}

namespace {

// Index at `layer` that covers bottom index n.
int cover(int n, int num_layers, int layer) { return ((n - 1) >> (num_layers - layer)) + 1; }

}  // namespace

int simulated_overhead(const std::set<int>& bottom, int num_layers, BeamId root,
                       const std::vector<int>& activation, int target) {
  // Known node: the root, then whatever each probed layer reveals.
  int known_layer = root.layer;
  int known_index = root.index;
  int probes = 0;
  bool first = true;
  for (int layer : activation) {
    std::set<int> probe_set;
    for (int n : bottom) {
      const bool under = known_layer == 0 || cover(n, num_layers, known_layer) == known_index;
      if (under) probe_set.insert(cover(n, num_layers, layer));
    }
    if (first || probe_set.size() >= 2) probes += static_cast<int>(probe_set.size());
    first = false;
    known_layer = layer;
    known_index = cover(target, num_layers, layer);
  }
  return probes;
}

std::set<int> random_bottom_set(std::mt19937_64& rng, int n) {
  std::set<int> s;
  std::bernoulli_distribution coin(std::uniform_real_distribution<double>(0.1, 0.9)(rng));
  for (int i = 1; i <= n; ++i) {
    if (coin(rng)) s.insert(i);
  }
  if (s.empty()) s.insert(std::uniform_int_distribution<int>(1, n)(rng));
  return s;
}

double ExactProber::measure(BeamId beam) {
  ++calls;
  return beam_gain(h_, cb_->codeword(beam));
}

std::filesystem::path config_path(const char* name) {
#ifdef CKMBEAM_CONFIG_DIR
  return std::filesystem::path(CKMBEAM_CONFIG_DIR) / name;
#else
  return std::filesystem::path("configs") / name;
#endif
}

bool single_dominant_path(const ChannelRealization& ch, double margin_db) {
  if (ch.paths.empty()) return false;
  std::vector<double> p;
  for (const auto& path : ch.paths) p.push_back(std::norm(path.complex_gain));
  std::sort(p.rbegin(), p.rend());
  double rest = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) rest += p[i];
  return rest == 0.0 || 10.0 * std::log10(p[0] / rest) >= margin_db;
}

}  // namespace fixtures
