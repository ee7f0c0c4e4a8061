#pragma once

#include <filesystem>
#include <random>
#include <set>
#include <vector>

#include "ckmbeam/beam_tree.hpp"
#include "ckmbeam/scenario.hpp"
#include "ckmbeam/strategy.hpp"

namespace fixtures {

using namespace ckmbeam;

/// Eight-antenna toy tree with bottom candidates {1, 2, 3, 5}.
struct ToyTree {
  BeamWeightTable table;
  PrunedTree tree;
};
ToyTree toy_tree(std::vector<double> bottom_weights = {1, 1, 1, 0, 1, 0, 0, 0});

/// Table with unit weight on the given bottom indices.
BeamWeightTable unit_table(int num_antennas, const std::set<int>& bottom);

/// Probe count obtained by walking an activation down a tree given only as
/// its set of bottom candidates. Every probe set is rebuilt from scratch by
/// integer division; nothing from the library's tree code is used.
int simulated_overhead(const std::set<int>& bottom, int num_layers, BeamId root,
                       const std::vector<int>& activation, int target);

/// Random non-empty subset of 1..n.
std::set<int> random_bottom_set(std::mt19937_64& rng, int n);

/// Probes a channel exactly, counting calls.
class ExactProber final : public Prober {
 public:
  ExactProber(const HierarchicalCodebook& cb, CVector h) : cb_(&cb), h_(std::move(h)) {}
  double measure(BeamId beam) override;
  int calls = 0;

 private:
  const HierarchicalCodebook* cb_;
  CVector h_;
};

std::filesystem::path config_path(const char* name);

/// Strongest path power exceeds the sum of all other path powers by at
/// least `margin_db`.
bool single_dominant_path(const ChannelRealization& ch, double margin_db = 10.0);

}  // namespace fixtures
