// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

namespace ckmbeam {

double empirical_cdf(std::span<const double> sorted, double x) {
  if (sorted.empty()) throw std::invalid_argument("empirical_cdf: no samples");
  const auto n = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
  return static_cast<double>(n) / static_cast<double>(sorted.size());
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<CdfPoint> cdf_table(std::vector<double> samples, const std::vector<double>& thresholds) {
  std::sort(samples.begin(), samples.end());
  std::vector<CdfPoint> out;
  for (double t : thresholds) out.push_back({t, empirical_cdf(samples, t)});
  return out;
}

}  // namespace

std::vector<SummaryStats> summarize(std::span<const TrialResult> rows, const SummaryOptions& options) {
  if (rows.empty()) throw std::invalid_argument("summarize: no results");

  struct Group {
    std::vector<double> overhead, gain, se;
    std::size_t hits = 0;
    std::map<int, double> per_trial;
  };
  std::vector<std::pair<std::pair<Algorithm, double>, Group>> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) {
      return g.first.first == r.algorithm && g.first.second == r.snr_db;
    });
    if (it == groups.end()) {
      groups.push_back({{r.algorithm, r.snr_db}, {}});
      it = std::prev(groups.end());
    }
    auto& g = it->second;
    g.overhead.push_back(r.overhead);
    g.gain.push_back(r.gain_ratio_db);
    g.se.push_back(r.se_bps_hz);
    g.hits += r.chosen == r.oracle;
    g.per_trial[r.trial_id] += r.overhead;
  }

  std::vector<SummaryStats> out;
  for (auto& [key, g] : groups) {
    SummaryStats s;
    s.algorithm = key.first;
    s.snr_db = key.second;
    s.rows = g.overhead.size();
    s.mean_overhead = mean(g.overhead);
    s.median_overhead = median(g.overhead);
    double total = 0.0;
    for (const auto& [_, v] : g.per_trial) total += v;
    s.mean_total_overhead = total / static_cast<double>(g.per_trial.size());
    s.mean_gain_ratio_db = mean(g.gain);
    s.median_gain_ratio_db = median(g.gain);
    s.mean_se_bps_hz = mean(g.se);
    s.hit_rate = static_cast<double>(g.hits) / static_cast<double>(s.rows);

    if (options.overhead_cdf) {
      auto th = options.overhead_thresholds;
      if (th.empty()) {
        const double hi = *std::max_element(g.overhead.begin(), g.overhead.end());
        for (int t = 0; t <= static_cast<int>(hi); ++t) th.push_back(t);
      }
      s.overhead_cdf = cdf_table(g.overhead, th);
    }
    if (options.gain_cdf) {
      auto th = options.gain_thresholds;
      if (th.empty()) {
        for (int t = -30; t <= 0; ++t) th.push_back(t);
      }
      s.gain_cdf = cdf_table(g.gain, th);
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_summary_csv(std::ostream& out, std::span<const SummaryStats> stats) {
  out << "algorithm,snr_db,metric,threshold,value\n";
  for (const auto& s : stats) {
    const std::string head = std::string(to_string(s.algorithm)) + ',' + num(s.snr_db) + ',';
    auto scalar = [&](const char* metric, double v) { out << head << metric << ",," << num(v) << '\n'; };
    scalar("rows", static_cast<double>(s.rows));
    scalar("mean_overhead", s.mean_overhead);
    scalar("median_overhead", s.median_overhead);
    scalar("mean_total_overhead", s.mean_total_overhead);
    scalar("mean_gain_ratio_db", s.mean_gain_ratio_db);
    scalar("median_gain_ratio_db", s.median_gain_ratio_db);
    scalar("mean_se_bps_hz", s.mean_se_bps_hz);
    scalar("hit_rate", s.hit_rate);
    for (const auto& p : s.overhead_cdf)
      out << head << "overhead_cdf," << num(p.threshold) << ',' << num(p.probability) << '\n';
    for (const auto& p : s.gain_cdf)
      out << head << "gain_cdf," << num(p.threshold) << ',' << num(p.probability) << '\n';
  }
}

}  // namespace ckmbeam
