#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "ckmbeam/ckmbeam.h"

namespace {

const std::string kSmoke = std::string(CKMBEAM_CONFIG_DIR) + "/smoke.json";

std::filesystem::path temp(const char* name) { return std::filesystem::temp_directory_path() / name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("c_api") {
  TEST_CASE("version") { CHECK(std::string(ckmb_version()).size() > 0); }

  TEST_CASE("scenario load and query") {
    ckmb_scenario* sc = nullptr;
    REQUIRE(ckmb_scenario_load(kSmoke.c_str(), &sc) == CKMB_OK);
    int n = 0, k = 0;
    CHECK(ckmb_scenario_num_antennas(sc, &n) == CKMB_OK);
    CHECK(ckmb_scenario_num_users(sc, &k) == CKMB_OK);
    CHECK(n == 16);
    CHECK(k == 2);
    ckmb_scenario_free(sc);
  }

  TEST_CASE("errors map to status codes") {
    ckmb_scenario* sc = nullptr;
    CHECK(ckmb_scenario_load("/nonexistent.json", &sc) == CKMB_IO_ERROR);
    CHECK(sc == nullptr);
    CHECK(std::string(ckmb_last_error()).size() > 0);
    CHECK(ckmb_scenario_parse("{\"bogus\": 1}", &sc) == CKMB_FORMAT_ERROR);
    CHECK(ckmb_scenario_parse(nullptr, &sc) == CKMB_INVALID_ARGUMENT);
    CHECK(ckmb_scenario_num_users(nullptr, nullptr) == CKMB_INVALID_ARGUMENT);
    ckmb_scenario_free(nullptr);
    ckmb_map_free(nullptr);
    ckmb_results_free(nullptr);
  }

  TEST_CASE("map build, save, load and lookup") {
    ckmb_scenario* sc = nullptr;
    REQUIRE(ckmb_scenario_load(kSmoke.c_str(), &sc) == CKMB_OK);
    ckmb_map* map = nullptr;
    REQUIRE(ckmb_map_build(sc, &map) == CKMB_OK);
    const auto path = temp("ckmbeam_c_api.ckm");
    REQUIRE(ckmb_map_save(map, path.c_str()) == CKMB_OK);
    ckmb_map* back = nullptr;
    REQUIRE(ckmb_map_load(path.c_str(), &back) == CKMB_OK);
    double a = -1, b = -1;
    CHECK(ckmb_map_lookup_gain(map, 3.2, 4.9, 4, 7, &a) == CKMB_OK);
    CHECK(ckmb_map_lookup_gain(back, 3.0, 5.0, 4, 7, &b) == CKMB_OK);
    CHECK(a == b);
    CHECK(a >= 0.0);
    CHECK(ckmb_map_lookup_gain(map, 3, 5, 5, 1, &a) == CKMB_OUT_OF_RANGE);

    std::ofstream(path, std::ios::binary) << "garbage";
    ckmb_map* bad = nullptr;
    CHECK(ckmb_map_load(path.c_str(), &bad) == CKMB_FORMAT_ERROR);
    std::filesystem::remove(path);
    ckmb_map_free(back);
    ckmb_map_free(map);
    ckmb_scenario_free(sc);
  }

  TEST_CASE("run, rows, CSV and summary") {
    ckmb_scenario* sc = nullptr;
    REQUIRE(ckmb_scenario_load(kSmoke.c_str(), &sc) == CKMB_OK);
    ckmb_map* map = nullptr;
    REQUIRE(ckmb_map_build(sc, &map) == CKMB_OK);

    ckmb_run_options o;
    ckmb_run_options_init(&o);
    o.trials = 2;
    o.workers = 2;
    const double snr[] = {std::numeric_limits<double>::infinity()};
    o.snr_db = snr;
    o.snr_count = 1;
    o.algorithms = "baseline-exhaustive,alg1";
    ckmb_results* res = nullptr;
    REQUIRE(ckmb_run(sc, map, &o, &res) == CKMB_OK);
    CHECK(ckmb_results_count(res) == 2 * 2 * 2);
    for (std::size_t i = 0; i < ckmb_results_count(res); ++i) {
      ckmb_row row;
      REQUIRE(ckmb_results_row(res, i, &row) == CKMB_OK);
      if (std::string(row.algorithm) == "baseline-exhaustive") {
        CHECK(row.overhead == 16);
        CHECK(row.chosen_index == row.oracle_index);
      }
      CHECK(std::isinf(row.se_bps_hz));
    }
    ckmb_row row;
    CHECK(ckmb_results_row(res, 999, &row) == CKMB_OUT_OF_RANGE);

    const auto csv = temp("ckmbeam_c_api.csv");
    REQUIRE(ckmb_results_write_csv(res, csv.c_str()) == CKMB_OK);
    ckmb_results* back = nullptr;
    REQUIRE(ckmb_results_read(csv.c_str(), &back) == CKMB_OK);
    CHECK(ckmb_results_count(back) == ckmb_results_count(res));

    const auto summary = temp("ckmbeam_c_api_summary.csv");
    REQUIRE(ckmb_summarize_csv(back, "overhead", summary.c_str()) == CKMB_OK);
    const auto text = slurp(summary);
    CHECK(text.find("overhead_cdf") != std::string::npos);
    CHECK(ckmb_summarize_csv(back, "latency", summary.c_str()) == CKMB_INVALID_ARGUMENT);

    o.algorithms = "alg9";
    ckmb_results* none = nullptr;
    CHECK(ckmb_run(sc, map, &o, &none) == CKMB_INVALID_ARGUMENT);

    std::filesystem::remove(csv);
    std::filesystem::remove(summary);
    ckmb_results_free(back);
    ckmb_results_free(res);
    ckmb_map_free(map);
    ckmb_scenario_free(sc);
  }
}
