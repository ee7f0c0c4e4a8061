// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ckmbeam/ckmbeam.h"

namespace {

int fail(const char* what) {
  std::fprintf(stderr, "ckmbeam: %s: %s\n", what, ckmb_last_error());
  return 1;
}

double parse_snr(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CKM-aided hierarchical beam training simulator"};
  app.require_subcommand(1);

  std::string config, out, ckm_path, algos, in, cdf = "overhead,gain";
  std::vector<std::string> snrs;
  int trials = -1, workers = -1;
  std::uint64_t seed = 0;

  auto* build = app.add_subcommand("build-ckm", "Build a channel knowledge map for a scenario");
  build->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  build->add_option("--out", out, "Output map file")->required();

  auto* run = app.add_subcommand("run", "Run Monte-Carlo trials");
  run->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--ckm", ckm_path, "Map file (built on the fly when omitted)");
  run->add_option("--algo", algos,
                  "Comma list: alg1,alg2,alg3,baseline-hier,baseline-exhaustive,perfect-csi");
  run->add_option("--trials", trials, "Trial count")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Master seed");
  run->add_option("--snr-db", snrs, "SNR list in dB (\"inf\" for noiseless)")->delimiter(',');
  run->add_option("--workers", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out, "Results CSV")->required();

  auto* summ = app.add_subcommand("summarize", "Summarise a results CSV");
  summ->add_option("--in", in, "Results CSV")->required()->check(CLI::ExistingFile);
  summ->add_option("--out", out, "Summary CSV")->required();
  summ->add_option("--cdf", cdf, "CDF metrics: overhead,gain");

  CLI11_PARSE(app, argc, argv);

  if (build->parsed()) {
    ckmb_scenario* sc = nullptr;
    if (ckmb_scenario_load(config.c_str(), &sc) != CKMB_OK) return fail("load scenario");
    ckmb_map* map = nullptr;
    if (ckmb_map_build(sc, &map) != CKMB_OK) {
      ckmb_scenario_free(sc);
      return fail("build map");
    }
    const auto st = ckmb_map_save(map, out.c_str());
    ckmb_map_free(map);
    ckmb_scenario_free(sc);
    return st == CKMB_OK ? 0 : fail("save map");
  }

  if (run->parsed()) {
    std::vector<double> snr_values;
    for (const auto& s : snrs) {
      try {
        snr_values.push_back(parse_snr(s));
      } catch (const std::exception&) {
        std::fprintf(stderr, "ckmbeam: bad --snr-db value '%s'\n", s.c_str());
        return 2;
      }
    }
    ckmb_scenario* sc = nullptr;
    if (ckmb_scenario_load(config.c_str(), &sc) != CKMB_OK) return fail("load scenario");
    ckmb_map* map = nullptr;
    const auto st = ckm_path.empty() ? ckmb_map_build(sc, &map) : ckmb_map_load(ckm_path.c_str(), &map);
    if (st != CKMB_OK) {
      ckmb_scenario_free(sc);
      return fail("load map");
    }
    ckmb_run_options opts;
    ckmb_run_options_init(&opts);
    opts.trials = trials;
    opts.workers = workers;
    opts.has_seed = seed_opt->count() > 0;
    opts.seed = seed;
    opts.snr_db = snr_values.data();
    opts.snr_count = snr_values.size();
    opts.algorithms = algos.c_str();
    ckmb_results* res = nullptr;
    const auto rs = ckmb_run(sc, map, &opts, &res);
    ckmb_map_free(map);
    ckmb_scenario_free(sc);
    if (rs != CKMB_OK) return fail("run");
    const auto ws = ckmb_results_write_csv(res, out.c_str());
    ckmb_results_free(res);
    return ws == CKMB_OK ? 0 : fail("write results");
  }

  ckmb_results* res = nullptr;
  if (ckmb_results_read(in.c_str(), &res) != CKMB_OK) return fail("read results");
  const auto st = ckmb_summarize_csv(res, cdf.c_str(), out.c_str());
  ckmb_results_free(res);
  return st == CKMB_OK ? 0 : fail("summarize");
}
