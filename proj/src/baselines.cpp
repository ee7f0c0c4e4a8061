// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/baselines.hpp"

#include <vector>

namespace ckmbeam {

SearchResult baseline_hierarchical(const HierarchicalCodebook& codebook, Prober& ue) {
  SearchResult result;
  BeamId node = kVirtualRoot;
  for (int l = 1; l <= codebook.num_layers(); ++l) {
    ProbeRound round;
    round.layer = l;
    round.probed = {{l, 2 * node.index - 1}, {l, 2 * node.index}};
    for (const auto& b : round.probed) round.magnitudes.push_back(ue.measure(b));
    round.observed = round.probed[strongest(round.magnitudes)];
    result.overhead += 2;
    node = round.observed;
    result.transcript.push_back(std::move(round));
  }
  result.chosen = node;
  return result;
}

SearchResult baseline_exhaustive(const HierarchicalCodebook& codebook, Prober& ue) {
  const int L = codebook.num_layers();
  ProbeRound round;
  round.layer = L;
  for (int n = 1; n <= codebook.num_antennas(); ++n) {
    round.probed.push_back({L, n});
    round.magnitudes.push_back(ue.measure({L, n}));
  }
  round.observed = round.probed[strongest(round.magnitudes)];
  SearchResult result;
  result.chosen = round.observed;
  result.overhead = codebook.num_antennas();
  result.transcript.push_back(std::move(round));
  return result;
}

BeamId oracle_beam(const HierarchicalCodebook& codebook, std::span<const cdouble> channel) {
  const int L = codebook.num_layers();
  std::vector<double> g;
  g.reserve(codebook.num_antennas());
  for (int n = 1; n <= codebook.num_antennas(); ++n) g.push_back(beam_gain(channel, codebook.codeword({L, n})));
  return {L, static_cast<int>(strongest(g)) + 1};
}

}  // namespace ckmbeam
