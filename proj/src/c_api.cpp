// SPDX-License-Identifier: Apache-2.0
#include "ckmbeam/ckmbeam.h"

#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "ckmbeam/ckm.hpp"
#include "ckmbeam/scenario.hpp"
#include "ckmbeam/summary.hpp"
#include "ckmbeam/trials.hpp"

struct ckmb_scenario {
  ckmbeam::Scenario value;
};
struct ckmb_map {
  ckmbeam::CkmGrid value;
};
struct ckmb_results {
  std::vector<ckmbeam::TrialResult> value;
};

namespace {

thread_local std::string g_last_error;

template <class F>
ckmb_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return CKMB_OK;
  } catch (const ckmbeam::FormatError& e) {
    g_last_error = e.what();
    return CKMB_FORMAT_ERROR;
  } catch (const ckmbeam::IoError& e) {
    g_last_error = e.what();
    return CKMB_IO_ERROR;
  } catch (const ckmbeam::DegenerateError& e) {
    g_last_error = e.what();
    return CKMB_DEGENERATE;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return CKMB_OUT_OF_RANGE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return CKMB_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CKMB_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CKMB_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CKMB_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

extern "C" {

const char* ckmb_last_error(void) { return g_last_error.c_str(); }
const char* ckmb_version(void) { return "0.1.0"; }

ckmb_status ckmb_scenario_load(const char* path, ckmb_scenario** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new ckmb_scenario{ckmbeam::Scenario(ckmbeam::load_scenario_file(path))};
  });
}

ckmb_status ckmb_scenario_parse(const char* json_text, ckmb_scenario** out) {
  return guard([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new ckmb_scenario{ckmbeam::Scenario(ckmbeam::parse_scenario(json_text))};
  });
}

void ckmb_scenario_free(ckmb_scenario* s) { delete s; }

ckmb_status ckmb_scenario_num_antennas(const ckmb_scenario* s, int* out) {
  return guard([&] {
    require(s, "scenario");
    require(out, "out");
    *out = s->value.codebook().num_antennas();
  });
}

ckmb_status ckmb_scenario_num_users(const ckmb_scenario* s, int* out) {
  return guard([&] {
    require(s, "scenario");
    require(out, "out");
    *out = static_cast<int>(s->value.user_count());
  });
}

ckmb_status ckmb_map_build(const ckmb_scenario* s, ckmb_map** out) {
  return guard([&] {
    require(s, "scenario");
    require(out, "out");
    *out = new ckmb_map{s->value.build_map()};
  });
}

ckmb_status ckmb_map_load(const char* path, ckmb_map** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new ckmb_map{ckmbeam::load_ckm_file(path)};
  });
}

ckmb_status ckmb_map_save(const ckmb_map* m, const char* path) {
  return guard([&] {
    require(m, "map");
    require(path, "path");
    ckmbeam::save_ckm_file(m->value, path);
  });
}

void ckmb_map_free(ckmb_map* m) { delete m; }

ckmb_status ckmb_map_lookup_gain(const ckmb_map* m, double x, double y, int layer, int index,
                                 double* out) {
  return guard([&] {
    require(m, "map");
    require(out, "out");
    if (!ckmbeam::is_valid({layer, index}, m->value.num_layers()))
      throw std::out_of_range("lookup_gain: invalid beam");
    *out = m->value.lookup_gain({x, y}, {layer, index});
  });
}

void ckmb_run_options_init(ckmb_run_options* o) {
  if (!o) return;
  *o = ckmb_run_options{};
  o->trials = -1;
  o->workers = -1;
}

ckmb_status ckmb_run(const ckmb_scenario* s, const ckmb_map* m, const ckmb_run_options* o,
                     ckmb_results** out) {
  return guard([&] {
    require(s, "scenario");
    require(m, "map");
    require(out, "out");
    ckmbeam::RunOptions ro;
    if (o) {
      if (o->trials >= 0) ro.trials = o->trials;
      if (o->workers >= 0) ro.workers = o->workers;
      if (o->has_seed) ro.seed = o->seed;
      if (o->snr_count > 0) {
        require(o->snr_db, "snr_db");
        ro.snr_db = std::vector<double>(o->snr_db, o->snr_db + o->snr_count);
      }
      if (o->algorithms && *o->algorithms) {
        std::vector<ckmbeam::Algorithm> algos;
        for (const auto& tag : split(o->algorithms)) algos.push_back(ckmbeam::parse_algorithm(tag));
        ro.algorithms = algos;
      }
    }
    *out = new ckmb_results{ckmbeam::run_trials(s->value, m->value, ro)};
  });
}

ckmb_status ckmb_results_read(const char* path, ckmb_results** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw ckmbeam::IoError(std::string("cannot open ") + path);
    *out = new ckmb_results{ckmbeam::read_results_csv(in)};
  });
}

void ckmb_results_free(ckmb_results* r) { delete r; }

size_t ckmb_results_count(const ckmb_results* r) { return r ? r->value.size() : 0; }

ckmb_status ckmb_results_row(const ckmb_results* r, size_t i, ckmb_row* out) {
  return guard([&] {
    require(r, "results");
    require(out, "out");
    const auto& t = r->value.at(i);
    *out = ckmb_row{t.trial_id,       ckmbeam::to_string(t.algorithm),
                    t.snr_db,         t.user_id,
                    t.overhead,       t.chosen.layer,
                    t.chosen.index,   t.oracle.layer,
                    t.oracle.index,   t.gain_ratio_db,
                    t.se_bps_hz};
  });
}

ckmb_status ckmb_results_write_csv(const ckmb_results* r, const char* path) {
  return guard([&] {
    require(r, "results");
    require(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ckmbeam::IoError(std::string("cannot write ") + path);
    ckmbeam::write_results_csv(f, r->value);
    if (!f) throw ckmbeam::IoError(std::string("write failed for ") + path);
  });
}

ckmb_status ckmb_summarize_csv(const ckmb_results* r, const char* cdf, const char* path) {
  return guard([&] {
    require(r, "results");
    require(path, "path");
    ckmbeam::SummaryOptions opts;
    opts.overhead_cdf = opts.gain_cdf = false;
    if (cdf) {
      for (const auto& c : split(cdf)) {
        if (c == "overhead") opts.overhead_cdf = true;
        else if (c == "gain") opts.gain_cdf = true;
        else throw std::invalid_argument("unknown CDF metric '" + c + "'");
      }
    }
    const auto stats = ckmbeam::summarize(r->value, opts);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ckmbeam::IoError(std::string("cannot write ") + path);
    ckmbeam::write_summary_csv(f, stats);
    if (!f) throw ckmbeam::IoError(std::string("write failed for ") + path);
  });
}

}  // extern "C"
