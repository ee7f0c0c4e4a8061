// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ckmbeam/scenario.hpp"

namespace ckmbeam {

struct TrialResult {
  int trial_id = 0;
  Algorithm algorithm = Algorithm::alg1;
  double snr_db = 0.0;
  int user_id = 0;
  int overhead = 0;
  BeamId chosen{};
  BeamId oracle{};
  double gain_ratio_db = 0.0;  // chosen vs oracle, <= 0
  double se_bps_hz = 0.0;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

/// Per-run overrides of the scenario's defaults.
struct RunOptions {
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> snr_db;
  std::optional<std::vector<Algorithm>> algorithms;
  std::optional<int> workers;
};

/// True grid position of every user in one trial (the draw run_trials uses).
std::vector<std::size_t> trial_positions(const Scenario& scenario, std::uint64_t seed, int trial);

/// Monte-Carlo trials. Within a trial every algorithm sees the same true
/// positions, channels and per-(user, SNR) noise stream. Rows come out in
/// trial order, then SNR, algorithm and user, whatever the worker count.
std::vector<TrialResult> run_trials(const Scenario& scenario, const CkmGrid& ckm,
                                    const RunOptions& options = {});

inline constexpr const char* kResultsHeader =
    "trial_id,algorithm,snr_db,user_id,overhead,chosen_layer,chosen_index,oracle_layer,"
    "oracle_index,gain_ratio_db,se_bps_hz";

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& rows);
/// Throws FormatError on a bad header or row.
std::vector<TrialResult> read_results_csv(std::istream& in);

}  // namespace ckmbeam
