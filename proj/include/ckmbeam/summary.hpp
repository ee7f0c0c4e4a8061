// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ckmbeam/trials.hpp"

namespace ckmbeam {

/// Fraction of samples <= x.
double empirical_cdf(std::span<const double> sorted_samples, double x);

struct CdfPoint {
  double threshold = 0.0;
  double probability = 0.0;
};

struct SummaryStats {
  Algorithm algorithm = Algorithm::alg1;
  double snr_db = 0.0;
  std::size_t rows = 0;
  double mean_overhead = 0.0;
  double median_overhead = 0.0;
  /// Mean over trials of the overhead summed across users.
  double mean_total_overhead = 0.0;
  double mean_gain_ratio_db = 0.0;
  double median_gain_ratio_db = 0.0;
  double mean_se_bps_hz = 0.0;
  double hit_rate = 0.0;
  std::vector<CdfPoint> overhead_cdf;
  std::vector<CdfPoint> gain_cdf;
};

struct SummaryOptions {
  /// Empty: every integer from 0 to the largest observed overhead.
  std::vector<double> overhead_thresholds;
  /// Empty: -30 dB to 0 dB in 1 dB steps.
  std::vector<double> gain_thresholds;
  bool overhead_cdf = true;
  bool gain_cdf = true;
};

/// One entry per (algorithm, SNR), in order of first appearance. Throws
/// std::invalid_argument on empty input.
std::vector<SummaryStats> summarize(std::span<const TrialResult> rows, const SummaryOptions& options = {});

/// Long format: algorithm,snr_db,metric,threshold,value.
void write_summary_csv(std::ostream& out, std::span<const SummaryStats> stats);

}  // namespace ckmbeam
