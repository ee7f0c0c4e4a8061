// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/trials.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>

#include "ckmbeam/baselines.hpp"
#include "ckmbeam/lookahead.hpp"
#include "ckmbeam/multi_user.hpp"

namespace ckmbeam {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
  return mix(mix(mix(mix(seed) ^ a) ^ b) ^ c);
}

struct UserDraw {
  CVector channel;
  BeamId oracle;
  double oracle_power = 0.0;
};

void check_probe_count(const SearchResult& r) {
  if (r.overhead != r.transcript_probes())
    throw std::logic_error("overhead does not match the probe transcript");
}

std::vector<TrialResult> run_one_trial(const Scenario& sc, const CkmGrid& ckm,
                                       const std::vector<std::vector<WeightedPoint>>& priors,
                                       int trial, std::uint64_t seed,
                                       const std::vector<double>& snrs,
                                       const std::vector<Algorithm>& algos) {
  const auto& cb = sc.codebook();
  const std::size_t K = sc.user_count();

  const auto positions = trial_positions(sc, seed, trial);
  std::vector<UserDraw> draws(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto ch =
        synthesize_channel(sc.environment(), sc.config().array, sc.grid().point(positions[k]));
    draws[k].channel = ch.vector(cb.num_antennas());
    draws[k].oracle = oracle_beam(cb, draws[k].channel);
    const double g = beam_gain(draws[k].channel, cb.codeword(draws[k].oracle));
    draws[k].oracle_power = g * g;
  }

  std::vector<TrialResult> rows;
  for (std::size_t s = 0; s < snrs.size(); ++s) {
    std::vector<double> noise(K);
    for (std::size_t k = 0; k < K; ++k) noise[k] = sc.noise_std(draws[k].channel, snrs[s]);
    auto make_prober = [&](std::size_t k) {
      return ChannelProber(cb, draws[k].channel, noise[k],
                           Rng(stream_seed(seed, 0x2 + static_cast<std::uint64_t>(trial), k, s)));
    };
    auto emit = [&](Algorithm a, std::size_t k, BeamId chosen, int overhead) {
      TrialResult r;
      r.trial_id = trial;
      r.algorithm = a;
      r.snr_db = snrs[s];
      r.user_id = static_cast<int>(k);
      r.overhead = overhead;
      r.chosen = chosen;
      r.oracle = draws[k].oracle;
      const double g = beam_gain(draws[k].channel, cb.codeword(chosen));
      const double p = g * g;
      r.gain_ratio_db = p > 0.0 ? std::min(0.0, 10.0 * std::log10(p / draws[k].oracle_power))
                                : -std::numeric_limits<double>::infinity();
      const double n2 = noise[k] * noise[k];
      r.se_bps_hz = n2 > 0.0 ? std::log2(1.0 + p / n2) : std::numeric_limits<double>::infinity();
      rows.push_back(r);
    };

    for (Algorithm a : algos) {
      if (a == Algorithm::alg3) {
        std::vector<ChannelProber> probers;
        probers.reserve(K);
        for (std::size_t k = 0; k < K; ++k) probers.push_back(make_prober(k));
        std::vector<Prober*> ptrs;
        for (auto& p : probers) ptrs.push_back(&p);
        const auto res = run_multi_user(ckm, priors, ptrs, {sc.weight_options(), sc.config().eta});
        int probes = 0;
        for (const auto& r : res.rounds) probes += static_cast<int>(r.probed.size());
        if (probes != res.total_overhead)
          throw std::logic_error("overhead does not match the probe transcript");
        for (std::size_t k = 0; k < K; ++k) emit(a, k, res.chosen[k], res.attributed_overhead[k]);
        continue;
      }
      for (std::size_t k = 0; k < K; ++k) {
        if (a == Algorithm::perfect_csi) {
          emit(a, k, draws[k].oracle, 0);
          continue;
        }
        ChannelProber ue = make_prober(k);
        SearchResult r;
        switch (a) {
          case Algorithm::alg1: r = run_single_user(ckm, priors[k], ue, sc.weight_options()); break;
          case Algorithm::alg2: r = run_lookahead(ckm, priors[k], ue, sc.weight_options()); break;
          case Algorithm::baseline_hier: r = baseline_hierarchical(cb, ue); break;
          case Algorithm::baseline_exhaustive: r = baseline_exhaustive(cb, ue); break;
          default: throw std::logic_error("unhandled algorithm");
        }
        check_probe_count(r);
        emit(a, k, r.chosen, r.overhead);
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<std::size_t> trial_positions(const Scenario& sc, std::uint64_t seed, int trial) {
  Rng rng(stream_seed(seed, 0x1, static_cast<std::uint64_t>(trial)));
  std::vector<std::size_t> out;
  for (const auto& prior : sc.priors()) out.push_back(sample_true_position(prior, rng));
  return out;
}

std::vector<TrialResult> run_trials(const Scenario& sc, const CkmGrid& ckm, const RunOptions& opt) {
  const auto& cfg = sc.config();
  const int trials = opt.trials.value_or(cfg.trials);
  const std::uint64_t seed = opt.seed.value_or(cfg.seed);
  const auto snrs = opt.snr_db.value_or(cfg.snr_db);
  const auto algos = opt.algorithms.value_or(cfg.algorithms);
  int workers = opt.workers.value_or(cfg.workers);
  if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
  if (snrs.empty()) throw std::invalid_argument("run_trials: snr list must not be empty");
  if (algos.empty()) throw std::invalid_argument("run_trials: algorithm list must not be empty");
  if (workers < 0) throw std::invalid_argument("run_trials: workers must be >= 0");
  if (!(ckm.grid() == sc.grid()) || ckm.num_antennas() != cfg.array.num_antennas)
    throw std::invalid_argument("run_trials: CKM does not match the scenario grid or array");

  std::vector<std::vector<WeightedPoint>> priors;
  for (const auto& p : sc.priors()) priors.push_back(p.weighted_points());

  if (workers == 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, trials);

  std::vector<std::vector<TrialResult>> per_trial(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (int t = next++; t < trials && !failed; t = next++) {
      try {
        per_trial[static_cast<std::size_t>(t)] = run_one_trial(sc, ckm, priors, t, seed, snrs, algos);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);

  std::vector<TrialResult> out;
  for (auto& v : per_trial) out.insert(out.end(), v.begin(), v.end());
  return out;
}

namespace {

std::string format_double(double v, const char* fmt) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<TrialResult>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.trial_id << ',' << to_string(r.algorithm) << ',' << format_double(r.snr_db, "%g") << ','
        << r.user_id << ',' << r.overhead << ',' << r.chosen.layer << ',' << r.chosen.index << ','
        << r.oracle.layer << ',' << r.oracle.index << ','
        << format_double(r.gain_ratio_db, "%.6f") << ',' << format_double(r.se_bps_hz, "%.6f")
        << '\n';
  }
}

std::vector<TrialResult> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) throw FormatError("results CSV has an unexpected header");
  std::vector<TrialResult> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 11) throw FormatError("results CSV line " + std::to_string(lineno) + ": expected 11 fields");
    try {
      TrialResult r;
      r.trial_id = parse_int(f[0]);
      r.algorithm = parse_algorithm(f[1]);
      r.snr_db = parse_double(f[2]);
      r.user_id = parse_int(f[3]);
      r.overhead = parse_int(f[4]);
      r.chosen = {parse_int(f[5]), parse_int(f[6])};
      r.oracle = {parse_int(f[7]), parse_int(f[8])};
      r.gain_ratio_db = parse_double(f[9]);
      r.se_bps_hz = parse_double(f[10]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw FormatError("results CSV line " + std::to_string(lineno) + ": bad value");
    }
  }
  return rows;
}

}  // namespace ckmbeam
