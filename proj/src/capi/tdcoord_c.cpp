// SPDX-License-Identifier: Apache-2.0
#include "tdcoord/tdcoord.h"

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "coord/pipeline.hpp"
#include "core/error.hpp"
#include "grid/io.hpp"
#include "grid/model.hpp"
#include "learn/history.hpp"
#include "sim/experiment.hpp"
#include "sim/report.hpp"
#include "sim/scenario.hpp"

using tdcoord::IoError;
using tdcoord::SolverError;
using tdcoord::ValidationError;

struct tdc_system {
  tdcoord::grid::PowerSystem sys;
};

struct tdc_history {
  std::vector<tdcoord::learn::HistoryRecord> records;
};

namespace {

thread_local std::string g_last_error = "no error";

template <typename Fn>
tdc_status guarded(Fn&& fn) {
  try {
    fn();
    return TDC_OK;
  } catch (const ValidationError& e) {
    g_last_error = e.what();
    return TDC_ERR_VALIDATION;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return TDC_ERR_IO;
  } catch (const SolverError& e) {
    g_last_error = e.what();
    return TDC_ERR_SOLVER;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TDC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TDC_ERR_INTERNAL;
  }
}

tdc_status require(bool ok, const char* message) {
  if (ok) return TDC_OK;
  g_last_error = message;
  return TDC_ERR_VALIDATION;
}

tdcoord::opf::ClearingOptions default_options(const tdcoord::grid::PowerSystem& sys) {
  tdcoord::opf::ClearingOptions opt;
  opt.lambda_lo = sys.lambda_lo;
  opt.lambda_hi = sys.lambda_hi;
  opt.base_mva = sys.base_mva;
  opt.solver.tol = 1e-10;
  return opt;
}

}  // namespace

extern "C" {

const char* tdc_last_error(void) { return g_last_error.c_str(); }

tdc_status tdc_system_load(const char* dir, tdc_system** out) {
  if (tdc_status s = require(dir && out, "tdc_system_load: null argument")) return s;
  return guarded([&] {
    auto* handle = new tdc_system{tdcoord::grid::load_system(dir)};
    *out = handle;
  });
}

tdc_status tdc_system_generate(const char* config_path, uint64_t seed, tdc_system** out) {
  if (tdc_status s = require(out != nullptr, "tdc_system_generate: null output")) return s;
  return guarded([&] {
    tdcoord::sim::ScenarioSpec spec;
    if (config_path && *config_path) spec = tdcoord::sim::read_scenario_spec(config_path);
    spec.seed = seed;
    *out = new tdc_system{tdcoord::sim::generate_scenario(spec)};
  });
}

tdc_status tdc_system_write(const tdc_system* sys, const char* dir) {
  if (tdc_status s = require(sys && dir, "tdc_system_write: null argument")) return s;
  return guarded([&] { tdcoord::grid::write_system(sys->sys, dir); });
}

tdc_status tdc_system_scale(const tdc_system* sys, double eta, tdc_system** out) {
  if (tdc_status s = require(sys && out, "tdc_system_scale: null argument")) return s;
  return guarded([&] {
    *out = new tdc_system{tdcoord::sim::scale_dn_impedances(sys->sys, eta)};
  });
}

int tdc_system_horizon(const tdc_system* sys) { return sys ? sys->sys.horizon : 0; }

int tdc_system_dn_count(const tdc_system* sys) {
  return sys ? static_cast<int>(sys->sys.dns.size()) : 0;
}

void tdc_system_free(tdc_system* sys) { delete sys; }

tdc_status tdc_history_build(const tdc_system* sys, int hours, int threads,
                             tdc_history** out) {
  if (tdc_status s = require(sys && out, "tdc_history_build: null argument")) return s;
  return guarded([&] {
    auto records = tdcoord::sim::build_history(sys->sys, hours, default_options(sys->sys),
                                               threads, &std::cerr);
    *out = new tdc_history{std::move(records)};
  });
}

tdc_status tdc_history_load(const char* path, tdc_history** out) {
  if (tdc_status s = require(path && out, "tdc_history_load: null argument")) return s;
  return guarded([&] { *out = new tdc_history{tdcoord::learn::read_history(path)}; });
}

tdc_status tdc_history_save(const tdc_history* history, const char* path) {
  if (tdc_status s = require(history && path, "tdc_history_save: null argument")) return s;
  return guarded([&] { tdcoord::learn::write_history(history->records, path); });
}

size_t tdc_history_size(const tdc_history* history) {
  return history ? history->records.size() : 0;
}

void tdc_history_free(tdc_history* history) { delete history; }

tdc_status tdc_evaluate_hour(const tdc_system* sys, const tdc_history* history,
                             const char* strategy, int hour, int neighbors,
                             int max_blocks, tdc_hour_metrics* out) {
  if (tdc_status s = require(sys && strategy && out, "tdc_evaluate_hour: null argument"))
    return s;
  return guarded([&] {
    tdcoord::coord::Strategy strat;
    strat.kind = tdcoord::coord::strategy_from_string(strategy);
    strat.neighbors = neighbors;
    strat.max_blocks = max_blocks;
    static const std::vector<tdcoord::learn::HistoryRecord> kEmpty;
    const auto& records = history ? history->records : kEmpty;
    tdcoord::coord::HourReport rep = tdcoord::coord::evaluate_hour(
        strat, sys->sys, hour, records, default_options(sys->sys));
    out->hour = rep.hour;
    out->forecast_mw = rep.forecast_mw;
    out->actual_mw = rep.actual_mw;
    out->delta_defined = rep.delta_pct.has_value() ? 1 : 0;
    out->delta_pct = rep.delta_pct.value_or(0.0);
    out->sw_d = rep.sw_d;
    out->sw_t = rep.sw_t;
    out->sw_total = rep.sw_total;
    out->sw_t_penalized = rep.sw_t_penalized;
    out->sw_total_penalized = rep.sw_total_penalized;
    out->slack_mw = rep.slack_mw;
    out->flex_forecast_pct = rep.flex_forecast_pct;
    out->flex_observed_pct = rep.flex_observed_pct;
    out->clearing_welfare = rep.clearing_welfare;
    out->clear_seconds = rep.clear_seconds;
  });
}

tdc_status tdc_run_experiment(const char* config_path, const char* out_dir, int verbose) {
  if (tdc_status s = require(config_path && out_dir, "tdc_run_experiment: null argument"))
    return s;
  return guarded([&] {
    tdcoord::sim::ExperimentConfig cfg = tdcoord::sim::read_experiment_config(config_path);
    tdcoord::sim::ExperimentResult result =
        tdcoord::sim::run_experiment(cfg, verbose ? &std::cerr : nullptr);
    tdcoord::sim::write_experiment(result, out_dir);
  });
}

tdc_status tdc_report(const char* reports_csv, const char* out_dir) {
  if (tdc_status s = require(reports_csv && out_dir, "tdc_report: null argument")) return s;
  return guarded([&] {
    auto rows = tdcoord::sim::read_reports(reports_csv);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError(std::string("cannot create ") + out_dir + ": " + ec.message());
    tdcoord::sim::write_figures(rows, out_dir);
  });
}

}  // extern "C"
