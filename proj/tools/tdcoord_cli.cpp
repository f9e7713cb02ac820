// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library exclusively through the C
// API so it exercises the same surface any foreign-language consumer gets.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "tdcoord/tdcoord.h"

namespace {

// 0 success, 1 bad input, 2 solver/internal failure.
int exit_code(tdc_status status) {
  switch (status) {
    case TDC_OK: return 0;
    case TDC_ERR_VALIDATION:
    case TDC_ERR_IO: return 1;
    case TDC_ERR_SOLVER:
    case TDC_ERR_INTERNAL: return 2;
  }
  return 2;
}

int finish(tdc_status status) {
  if (status != TDC_OK) std::fprintf(stderr, "error: %s\n", tdc_last_error());
  return exit_code(status);
}

int cmd_generate(const std::string& config, std::uint64_t seed, const std::string& out) {
  tdc_system* sys = nullptr;
  tdc_status status = tdc_system_generate(config.c_str(), seed, &sys);
  if (status == TDC_OK) status = tdc_system_write(sys, out.c_str());
  tdc_system_free(sys);
  return finish(status);
}

int cmd_history(const std::string& system_dir, int hours, int threads,
                const std::string& out) {
  tdc_system* sys = nullptr;
  tdc_history* history = nullptr;
  tdc_status status = tdc_system_load(system_dir.c_str(), &sys);
  if (status == TDC_OK) status = tdc_history_build(sys, hours, threads, &history);
  if (status == TDC_OK) status = tdc_history_save(history, out.c_str());
  tdc_history_free(history);
  tdc_system_free(sys);
  return finish(status);
}

int cmd_run(const std::string& config, const std::string& out, bool quiet) {
  return finish(tdc_run_experiment(config.c_str(), out.c_str(), quiet ? 0 : 1));
}

int cmd_report(const std::string& in, const std::string& out) {
  return finish(tdc_report(in.c_str(), out.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission-distribution coordination study harness"};
  app.require_subcommand(1);

  std::string config, out, system_dir, in_file;
  std::uint64_t seed = 1;
  int hours = 336;
  int threads = 0;
  bool quiet = false;

  CLI::App* generate = app.add_subcommand("generate", "Synthesize a study system");
  generate->add_option("--config", config, "generator key=value file")->required();
  generate->add_option("--seed", seed, "random seed")->required();
  generate->add_option("--out", out, "output system directory")->required();

  CLI::App* history = app.add_subcommand("history", "Build benchmark operating history");
  history->add_option("--system", system_dir, "system directory")->required();
  history->add_option("--hours", hours, "hours to clear, starting at 0")->required();
  history->add_option("--out", out, "history CSV path")->required();
  history->add_option("--threads", threads, "worker threads (0 = all)");

  CLI::App* run = app.add_subcommand("run", "Run the full experiment");
  run->add_option("--config", config, "experiment key=value file")->required();
  run->add_option("--out", out, "output directory")->required();
  run->add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* report = app.add_subcommand("report", "Rebuild figure data from reports.csv");
  report->add_option("--in", in_file, "reports.csv path")->required();
  report->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (generate->parsed()) return cmd_generate(config, seed, out);
  if (history->parsed()) return cmd_history(system_dir, hours, threads, out);
  if (run->parsed()) return cmd_run(config, out, quiet);
  if (report->parsed()) return cmd_report(in_file, out);
  return 1;
}
