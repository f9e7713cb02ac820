// SPDX-License-Identifier: Apache-2.0
#include <unistd.h>
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "fixtures.hpp"
#include "grid/io.hpp"
#include "sim/experiment.hpp"
#include "sim/report.hpp"
#include "sim/scenario.hpp"

using namespace tdcoord;

namespace {

std::filesystem::path temp_dir(const char* stem) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string(stem) + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

sim::ScenarioSpec small_spec(int horizon = 48, int dns = 2,
                             std::uint64_t seed = 7) {
  sim::ScenarioSpec spec;
  spec.horizon = horizon;
  spec.dn_count = dns;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("scenario generation is deterministic to the byte") {
  auto a = sim::generate_scenario(small_spec());
  auto b = sim::generate_scenario(small_spec());
  auto dir = temp_dir("tdcoord_scn");
  grid::write_system(a, dir / "a");
  grid::write_system(b, dir / "b");
  for (const char* name : {"config.txt", "buses.csv", "lines.csv",
                           "generators.csv", "consumers.csv",
                           "timeseries.csv"}) {
    auto ta = csv::read_text_file(dir / "a" / name);
    auto tb = csv::read_text_file(dir / "b" / name);
    CHECK(ta == tb);
    CHECK_FALSE(ta.empty());
  }
  auto c = sim::generate_scenario(small_spec(48, 2, 8));
  grid::write_system(c, dir / "c");
  CHECK(csv::read_text_file(dir / "a" / "timeseries.csv") !=
        csv::read_text_file(dir / "c" / "timeseries.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("generated scenarios satisfy the study conventions") {
  auto sys = sim::generate_scenario(small_spec(72, 3));
  CHECK(sys.horizon == 72);
  CHECK(sys.dns.size() == 3);
  CHECK(sys.lambda_lo == 10.0);
  CHECK(sys.lambda_hi == 25.0);
  for (const auto& dn : sys.dns) {
    for (const auto& c : dn.net.consumers) {
      CHECK(c.delta >= 0.5);
      CHECK(c.delta <= 0.75);
      CHECK(c.gamma >= 0.25);
      CHECK(c.gamma <= 0.40);
      for (double v : c.baseline) CHECK(v > 0.0);
    }
    bool has_solar = false;
    for (const auto& g : dn.net.generators)
      if (g.kind == grid::GenKind::kSolar) has_solar = true;
    CHECK(has_solar);
    for (const auto& g : dn.net.generators) {
      if (g.kind != grid::GenKind::kSolar) continue;
      for (int t = 0; t < sys.horizon; ++t) {
        int h = t % 24;
        if (h <= 6 || h >= 20)
          CHECK(g.capacity_factor[t] == 0.0);  // no sun at night
      }
    }
  }
  bool has_wind = false;
  for (const auto& g : sys.transmission.generators)
    if (g.kind == grid::GenKind::kWind) has_wind = true;
  CHECK(has_wind);
}

TEST_CASE("scenario spec file parsing") {
  auto dir = temp_dir("tdcoord_spec");
  csv::write_text_file(dir / "gen.txt", "horizon=60\ndns=2\nseed=5\n");
  auto spec = sim::read_scenario_spec(dir / "gen.txt");
  CHECK(spec.horizon == 60);
  CHECK(spec.dn_count == 2);
  CHECK(spec.seed == 5);

  csv::write_text_file(dir / "bad.txt", "horizon=60\nwat=1\n");
  CHECK_THROWS_AS(sim::read_scenario_spec(dir / "bad.txt"), ValidationError);
  csv::write_text_file(dir / "neg.txt", "horizon=0\n");
  CHECK_THROWS_AS(sim::read_scenario_spec(dir / "neg.txt"), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("impedance scaling touches only distribution lines") {
  auto sys = sim::generate_scenario(small_spec());
  auto scaled = sim::scale_dn_impedances(sys, 1.33);
  for (std::size_t l = 0; l < sys.transmission.lines.size(); ++l) {
    CHECK(scaled.transmission.lines[l].r == sys.transmission.lines[l].r);
    CHECK(scaled.transmission.lines[l].x == sys.transmission.lines[l].x);
  }
  for (std::size_t k = 0; k < sys.dns.size(); ++k)
    for (std::size_t l = 0; l < sys.dns[k].net.lines.size(); ++l) {
      CHECK(scaled.dns[k].net.lines[l].r ==
            doctest::Approx(1.33 * sys.dns[k].net.lines[l].r).epsilon(1e-15));
      CHECK(scaled.dns[k].net.lines[l].x ==
            doctest::Approx(1.33 * sys.dns[k].net.lines[l].x).epsilon(1e-15));
      CHECK(scaled.dns[k].net.lines[l].s_max == sys.dns[k].net.lines[l].s_max);
    }
  auto same = sim::scale_dn_impedances(sys, 1.0);
  CHECK(same.dns[0].net.lines[0].r == sys.dns[0].net.lines[0].r);
  CHECK_THROWS_AS(sim::scale_dn_impedances(sys, 0.0), ValidationError);
}

TEST_CASE("nearest-rank percentiles") {
  std::vector<double> v;
  for (int i = 100; i >= 1; --i) v.push_back(i);
  CHECK(sim::percentile(v, 5.0) == 5.0);
  CHECK(sim::percentile(v, 95.0) == 95.0);
  CHECK(sim::percentile(v, 100.0) == 100.0);
  CHECK(sim::percentile(v, 0.0) == 1.0);
  CHECK(sim::percentile({1.0, 2.0, 3.0, 4.0}, 50.0) == 2.0);
  CHECK(sim::percentile({7.0}, 50.0) == 7.0);
  CHECK_THROWS_AS(sim::percentile({}, 50.0), ValidationError);
  CHECK_THROWS_AS(sim::percentile({1.0}, -1.0), ValidationError);
  CHECK_THROWS_AS(sim::percentile({1.0}, 101.0), ValidationError);
}

TEST_CASE("test hours are sampled from the holdout range") {
  auto hours = sim::sample_test_hours(336, 420, 24, 11);
  REQUIRE(hours.size() == 24);
  CHECK(std::is_sorted(hours.begin(), hours.end()));
  std::set<int> uniq(hours.begin(), hours.end());
  CHECK(uniq.size() == hours.size());
  for (int h : hours) {
    CHECK(h >= 336);
    CHECK(h < 420);
  }
  CHECK(sim::sample_test_hours(336, 420, 24, 11) == hours);
  CHECK(sim::sample_test_hours(336, 420, 24, 12) != hours);
  // Requesting the whole pool enumerates it.
  auto all = sim::sample_test_hours(10, 14, 4, 3);
  CHECK(all == std::vector<int>{10, 11, 12, 13});
  CHECK_THROWS_AS(sim::sample_test_hours(10, 14, 5, 3), ValidationError);
}

TEST_CASE("history built from benchmark clearings covers every feeder") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  // Stretch the fixture to three hours.
  sys.transmission.consumers[0].baseline = {50.0, 55.0, 45.0};
  sys.dns[0].net.consumers[0].baseline = {10.0, 11.0, 9.0};
  sys.transmission.generators[0].capacity_factor = {1.0, 1.0, 1.0};
  sys.horizon = 3;
  grid::validate_system(sys);
  auto opt = fixtures::clearing_options();
  std::ostringstream log;
  auto hist = sim::build_history(sys, 3, opt, 1, &log);
  REQUIRE(hist.size() == 3);
  for (int t = 0; t < 3; ++t) {
    CHECK(hist[t].hour == t);
    CHECK(hist[t].dn_id == sys.dns[0].net.id);
    CHECK(hist[t].context.size() == 3);
    CHECK(hist[t].lambda > 10.0);
    CHECK(hist[t].lambda < 25.0);
    CHECK(hist[t].intake_mw > 0.0);
  }
  // Threaded build gives the same records in the same order.
  auto hist2 = sim::build_history(sys, 3, opt, 2, nullptr);
  REQUIRE(hist2.size() == hist.size());
  for (std::size_t i = 0; i < hist.size(); ++i) {
    CHECK(hist2[i].hour == hist[i].hour);
    CHECK(hist2[i].lambda == hist[i].lambda);
    CHECK(hist2[i].intake_mw == hist[i].intake_mw);
  }
}

TEST_CASE("report rows survive a file round-trip including missing deltas") {
  std::vector<sim::ReportRow> rows(2);
  rows[0].hour = 336;
  rows[0].strategy = coord::StrategyKind::kSingleBus;
  rows[0].eta = 0.67;
  rows[0].delta_pct = 3.25;
  rows[0].sw_total = 1234.5;
  rows[0].sw_t = -100.25;
  rows[0].sw_d = 1334.75;
  rows[0].sw_bn = 1300.0;
  rows[0].forecast_mw = 80.5;
  rows[0].actual_mw = 78.0;
  rows[0].slack_mw = 0.0;
  rows[0].flex_forecast_pct = 12.5;
  rows[0].flex_observed_pct = 11.25;
  rows[1].hour = 340;
  rows[1].strategy = coord::StrategyKind::kPriceAware;
  rows[1].eta = 1.33;
  rows[1].delta_pct = std::nullopt;
  rows[1].sw_bn = 900.0;

  auto dir = temp_dir("tdcoord_rep");
  sim::write_reports(rows, dir / "reports.csv");
  auto back = sim::read_reports(dir / "reports.csv");
  REQUIRE(back.size() == 2);
  CHECK(back[0].hour == 336);
  CHECK(back[0].strategy == coord::StrategyKind::kSingleBus);
  CHECK(back[0].eta == 0.67);
  REQUIRE(back[0].delta_pct.has_value());
  CHECK(*back[0].delta_pct == 3.25);
  CHECK(back[0].sw_total == 1234.5);
  CHECK(back[0].sw_t == -100.25);
  CHECK(back[0].sw_d == 1334.75);
  CHECK(back[0].forecast_mw == 80.5);
  CHECK(back[0].flex_observed_pct == 11.25);
  CHECK_FALSE(back[1].delta_pct.has_value());
  CHECK(back[1].sw_bn == 900.0);

  auto text = csv::read_text_file(dir / "reports.csv");
  CHECK(text.rfind("hour,strategy,eta,delta_pct,sw_total,sw_t,sw_d,sw_bn,"
                   "forecast_mw,actual_mw,slack_mw,flex_forecast_pct,"
                   "flex_observed_pct\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("figure files group by eta and strategy") {
  std::vector<sim::ReportRow> rows;
  auto add = [&](coord::StrategyKind s, double eta, double delta, double sw,
                 double sw_bn) {
    sim::ReportRow r;
    r.hour = static_cast<int>(rows.size());
    r.strategy = s;
    r.eta = eta;
    if (s != coord::StrategyKind::kBenchmark) r.delta_pct = delta;
    r.sw_total = sw;
    r.sw_bn = sw_bn;
    r.flex_forecast_pct = 10.0;
    r.flex_observed_pct = 9.0;
    rows.push_back(r);
  };
  for (double eta : {0.67, 1.0}) {
    add(coord::StrategyKind::kBenchmark, eta, 0.0, 1000.0, 1000.0);
    add(coord::StrategyKind::kBenchmark, eta, 0.0, 998.0, 998.0);
    add(coord::StrategyKind::kSingleBus, eta, 4.0, 990.0, 1000.0);
    add(coord::StrategyKind::kSingleBus, eta, 6.0, 958.08, 998.0);
  }

  auto dir = temp_dir("tdcoord_fig");
  sim::write_figures(rows, dir);
  auto imb = csv::Table::read_file(dir / "fig_imbalance.csv");
  imb.require_columns({"eta", "strategy", "mean", "p5", "p95"});
  CHECK(imb.rows() == 2);  // SB at two etas; the benchmark is excluded
  for (std::size_t r = 0; r < imb.rows(); ++r)
    CHECK(imb.cell(r, "strategy") == "SB");
  CHECK(imb.number(0, "mean") == 5.0);

  auto loss = csv::Table::read_file(dir / "fig_swloss.csv");
  loss.require_columns({"eta", "strategy", "mean", "p5", "p95"});
  CHECK(loss.rows() == 4);  // BN and SB at two etas
  // SB loss at eta 0.67: mean of 1.0 and 4.0 percent.
  bool found = false;
  for (std::size_t r = 0; r < loss.rows(); ++r)
    if (loss.cell(r, "strategy") == "SB" && loss.number(r, "eta") == 0.67) {
      CHECK(loss.number(r, "mean") == doctest::Approx(2.5).epsilon(1e-9));
      found = true;
    }
  CHECK(found);

  auto flex = csv::Table::read_file(dir / "fig_flexibility.csv");
  flex.require_columns({"eta", "strategy", "flex_forecast", "flex_observed"});
  CHECK(flex.rows() == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment config parsing resolves paths and validates") {
  auto dir = temp_dir("tdcoord_cfg");
  csv::write_text_file(dir / "exp.txt",
                       "system=sys\netas=0.67,1,1.33\nseed=3\n"
                       "train_hours=48\ntest_hours=6\nneighbors=5\n"
                       "max_blocks=4\nstrategies=BN,SB,PAG,PAW\n"
                       "polygon_sides=12\nsolver_tol=1e-9\nthreads=2\n");
  auto cfg = sim::read_experiment_config(dir / "exp.txt");
  CHECK(cfg.system_dir == dir / "sys");
  REQUIRE(cfg.etas.size() == 3);
  CHECK(cfg.etas[1] == 1.0);
  CHECK(cfg.seed == 3);
  CHECK(cfg.train_hours == 48);
  CHECK(cfg.test_hours == 6);
  CHECK(cfg.neighbors == 5);
  CHECK(cfg.max_blocks == 4);
  REQUIRE(cfg.strategies.size() == 4);
  CHECK(cfg.strategies[3] == coord::StrategyKind::kPriceAware);
  CHECK(cfg.polygon_sides == 12);
  CHECK(cfg.solver_tol == 1e-9);
  CHECK(cfg.threads == 2);

  csv::write_text_file(dir / "mini.txt", "system=/abs/path\n");
  auto mini = sim::read_experiment_config(dir / "mini.txt");
  CHECK(mini.system_dir == std::filesystem::path("/abs/path"));
  CHECK(mini.train_hours == 336);
  CHECK(mini.strategies.size() == 4);

  csv::write_text_file(dir / "nosys.txt", "seed=1\n");
  CHECK_THROWS_AS(sim::read_experiment_config(dir / "nosys.txt"),
                  ValidationError);
  csv::write_text_file(dir / "badeta.txt", "system=s\netas=1,1\n");
  CHECK_THROWS_AS(sim::read_experiment_config(dir / "badeta.txt"),
                  ValidationError);
  csv::write_text_file(dir / "badstrat.txt", "system=s\nstrategies=BN,XX\n");
  CHECK_THROWS_AS(sim::read_experiment_config(dir / "badstrat.txt"),
                  ValidationError);
  csv::write_text_file(dir / "unknown.txt", "system=s\nwat=1\n");
  CHECK_THROWS_AS(sim::read_experiment_config(dir / "unknown.txt"),
                  ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("full experiment on a miniature system is internally consistent") {
  auto sys = sim::generate_scenario(small_spec(60, 2, 21));
  auto dir = temp_dir("tdcoord_exp");
  grid::write_system(sys, dir / "sys");

  sim::ExperimentConfig cfg;
  cfg.system_dir = dir / "sys";
  cfg.etas = {1.0};
  cfg.seed = 4;
  cfg.train_hours = 36;
  cfg.test_hours = 4;
  cfg.neighbors = 6;
  cfg.max_blocks = 4;
  cfg.threads = 2;
  cfg.solver_tol = 1e-9;

  auto result = sim::run_experiment(cfg, nullptr);
  REQUIRE(result.etas.size() == 1);
  const auto& eo = result.etas[0];
  CHECK(eo.test_hours.size() == 4);
  CHECK(eo.history.size() <= 36u * 2u);
  CHECK(eo.history.size() >= 2u);
  REQUIRE(eo.strategies.size() == 4);
  REQUIRE(eo.benchmark.size() == 4);

  // Benchmark rows measure essentially no imbalance.
  for (const auto& rep : eo.benchmark) {
    REQUIRE(rep.delta_pct.has_value());
    CHECK(*rep.delta_pct <= 1e-4);
  }
  // PAW produced one bid per (hour, feeder).
  CHECK(eo.bids.size() == 4u * 2u);

  auto rows = sim::report_rows(result);
  CHECK(rows.size() == 4u * 4u);
  auto summary = sim::summarize(result);
  REQUIRE(summary.size() == 4);

  // The summary must be recomputable from the report rows alone.
  for (const auto& s : summary) {
    std::vector<double> deltas, losses;
    double ff = 0.0, fo = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      if (r.eta != s.eta || r.strategy != s.strategy) continue;
      ++n;
      if (r.delta_pct) deltas.push_back(*r.delta_pct);
      losses.push_back(100.0 * (r.sw_bn - r.sw_total) / r.sw_bn);
      ff += r.flex_forecast_pct;
      fo += r.flex_observed_pct;
    }
    REQUIRE(n == 4);
    double dmean = 0.0;
    for (double d : deltas) dmean += d;
    dmean = deltas.empty() ? 0.0 : dmean / deltas.size();
    double lmean = 0.0;
    for (double l : losses) lmean += l;
    lmean /= n;
    CHECK(s.delta_mean == doctest::Approx(dmean).epsilon(1e-9).scale(1.0));
    CHECK(s.swloss_mean == doctest::Approx(lmean).epsilon(1e-9).scale(1.0));
    if (!deltas.empty()) {
      CHECK(s.delta_p5 == sim::percentile(deltas, 5.0));
      CHECK(s.delta_p95 == sim::percentile(deltas, 95.0));
    }
    CHECK(s.swloss_p95 ==
          doctest::Approx(sim::percentile(losses, 95.0)).epsilon(1e-9));
    CHECK(s.flex_forecast_mean == doctest::Approx(ff / n).epsilon(1e-9));
    CHECK(s.flex_observed_mean == doctest::Approx(fo / n).epsilon(1e-9));
    CHECK(s.tso_loss_pct + s.dso_loss_pct ==
          doctest::Approx(s.swloss_mean).epsilon(1e-6).scale(1.0));
  }

  // Artifacts land on disk with the expected names.
  sim::write_experiment(result, dir / "out");
  for (const char* name :
       {"reports.csv", "summary.csv", "fig_imbalance.csv", "fig_swloss.csv",
        "fig_flexibility.csv", "history_eta_1.csv", "bids_eta_1.csv"})
    CHECK(std::filesystem::exists(dir / "out" / name));
  auto back = sim::read_reports(dir / "out" / "reports.csv");
  CHECK(back.size() == rows.size());
  std::filesystem::remove_all(dir);
}
