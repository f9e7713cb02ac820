// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "coord/pipeline.hpp"
#include "core/error.hpp"
#include "fixtures.hpp"
#include "opf/distribution.hpp"

using namespace tdcoord;
using coord::Strategy;
using coord::StrategyKind;

namespace {

Strategy strategy(StrategyKind kind, int k = 3, int blocks = 4) {
  Strategy s;
  s.kind = kind;
  s.neighbors = k;
  s.max_blocks = blocks;
  return s;
}

// History whose intake column is constant regardless of context or price.
std::vector<learn::HistoryRecord> flat_history(const grid::PowerSystem& sys,
                                               double intake, int hours = 6) {
  std::vector<learn::HistoryRecord> recs;
  for (int t = 0; t < hours; ++t)
    for (std::size_t k = 0; k < sys.dns.size(); ++k) {
      learn::HistoryRecord r;
      r.hour = t;
      r.dn_id = sys.dns[k].net.id;
      r.context = coord::context_for(sys, static_cast<int>(k), 0);
      r.context[0] += 0.01 * t;  // avoid a fully degenerate feature matrix
      r.lambda = 11.0 + 0.5 * t;
      r.intake_mw = intake;
      recs.push_back(r);
    }
  return recs;
}

grid::PowerSystem relaxed_system() {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  for (auto& b : sys.dns[0].net.buses) {
    b.vmin2 = 0.0;
    b.vmax2 = 100.0;
  }
  for (auto& l : sys.dns[0].net.lines) l.s_max = 1e8;
  grid::validate_system(sys);
  return sys;
}

}  // namespace

TEST_CASE("strategy tags round-trip") {
  for (auto kind : {StrategyKind::kBenchmark, StrategyKind::kSingleBus,
                    StrategyKind::kPriceAgnostic, StrategyKind::kPriceAware})
    CHECK(coord::strategy_from_string(coord::to_string(kind)) == kind);
  CHECK(std::string(coord::to_string(StrategyKind::kBenchmark)) == "BN");
  CHECK(std::string(coord::to_string(StrategyKind::kSingleBus)) == "SB");
  CHECK(std::string(coord::to_string(StrategyKind::kPriceAgnostic)) == "PAG");
  CHECK(std::string(coord::to_string(StrategyKind::kPriceAware)) == "PAW");
  CHECK_THROWS_AS(coord::strategy_from_string("XX"), ValidationError);
}

TEST_CASE("context features aggregate the feeder state") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  sys.dns[0].net.generators.push_back({"s1", 1, 0.0, 0.0, 0.0, 8.0, -2.0, 2.0,
                                       std::nullopt, grid::GenKind::kSolar,
                                       {0.75}});
  sys.transmission.generators.push_back({"w1", 0, 0.0, 0.0, 0.0, 40.0, -10.0,
                                         10.0, std::nullopt,
                                         grid::GenKind::kWind, {0.5}});
  grid::validate_system(sys);
  auto ctx = coord::context_for(sys, 0, 0);
  REQUIRE(ctx.size() == 3);
  CHECK(ctx[0] == doctest::Approx(10.0));  // aggregate baseline demand
  CHECK(ctx[1] == doctest::Approx(0.75)); // solar availability
  CHECK(ctx[2] == doctest::Approx(0.5));  // wind availability
}

TEST_CASE("power imbalance is a percentage of the realized intake") {
  CHECK(*coord::power_imbalance(80.0, 80.0) == doctest::Approx(0.0).scale(1.0));
  CHECK(*coord::power_imbalance(81.0, 80.0) == doctest::Approx(1.25));
  CHECK(*coord::power_imbalance(79.0, -80.0) ==
        doctest::Approx(100.0 * 159.0 / 80.0));
  CHECK_FALSE(coord::power_imbalance(5.0, 0.0).has_value());
}

TEST_CASE("benchmark clearing forecasts the response it will get") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  auto rep = coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0,
                                  {}, opt);
  REQUIRE(rep.delta_pct.has_value());
  CHECK(*rep.delta_pct <= 1e-6);
  CHECK(rep.slack_mw <= 1e-6);
  CHECK(rep.forecast_mw == doctest::Approx(3225.0 / 228.0).epsilon(1e-5));
  CHECK(rep.strategy == StrategyKind::kBenchmark);
  REQUIRE(rep.dns.size() == 1);
  CHECK(rep.dns[0].lambda == doctest::Approx(857.5 / 76.0).epsilon(1e-5));
}

TEST_CASE("benchmark welfare decomposes into the clearing objective") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  auto rep = coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0,
                                  {}, opt);
  CHECK(rep.sw_total ==
        doctest::Approx(rep.clearing_welfare).epsilon(1e-6));
  CHECK(rep.sw_total == doctest::Approx(rep.sw_d + rep.sw_t).epsilon(1e-12));
  // No slack, so the penalized ledger coincides with free adaptation.
  CHECK(rep.sw_total_penalized == doctest::Approx(rep.sw_total).epsilon(1e-9));
}

TEST_CASE("price-agnostic clearing pins intake to the forecast") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  auto hist = flat_history(sys, 42.0);
  auto res = coord::clear_market(strategy(StrategyKind::kPriceAgnostic), sys, 0,
                                 hist, opt);
  CHECK(res.tx.dn_import[0] == doctest::Approx(42.0).epsilon(1e-8));
  REQUIRE(res.models.size() == 1);
  CHECK(res.models[0].kind == opf::DnModelKind::kFixed);
  CHECK(res.models[0].fixed_import == doctest::Approx(42.0));
}

TEST_CASE("a perfect forecast closes the loop for a rigid feeder") {
  // With delta = 0 the feeder always draws its baseline, so forecasting the
  // baseline leaves essentially no imbalance.
  auto sys = fixtures::two_bus_with_dn(10.0, 0.0, 0.0);
  auto opt = fixtures::clearing_options();
  auto hist = flat_history(sys, 10.0);
  auto rep = coord::evaluate_hour(strategy(StrategyKind::kPriceAgnostic), sys,
                                  0, hist, opt);
  REQUIRE(rep.delta_pct.has_value());
  CHECK(*rep.delta_pct <= 1e-4);
}

TEST_CASE("strategies needing history refuse to run without it") {
  auto sys = fixtures::two_bus_with_dn();
  auto opt = fixtures::clearing_options();
  CHECK_THROWS_AS(coord::clear_market(strategy(StrategyKind::kPriceAgnostic),
                                      sys, 0, {}, opt),
                  ValidationError);
  CHECK_THROWS_AS(coord::clear_market(strategy(StrategyKind::kPriceAware),
                                      sys, 0, {}, opt),
                  ValidationError);
  // The benchmark and single-bus strategies ignore history entirely.
  coord::clear_market(strategy(StrategyKind::kBenchmark), sys, 0, {}, opt);
  coord::clear_market(strategy(StrategyKind::kSingleBus), sys, 0, {}, opt);
}

TEST_CASE("single-bus equals the benchmark when the network cannot bind") {
  auto sys = relaxed_system();
  auto opt = fixtures::clearing_options();
  auto bn = coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0,
                                 {}, opt);
  auto sb = coord::evaluate_hour(strategy(StrategyKind::kSingleBus), sys, 0,
                                 {}, opt);
  CHECK(sb.forecast_mw ==
        doctest::Approx(bn.forecast_mw).epsilon(1e-6));
  CHECK(sb.sw_total ==
        doctest::Approx(bn.sw_total).epsilon(1e-6));
  REQUIRE(sb.delta_pct.has_value());
  CHECK(*sb.delta_pct <= 1e-4);
}

TEST_CASE("price-aware bids reproduce a learnable response") {
  // Build history by sweeping prices against the true feeder response, then
  // check the learned bid clears close to the benchmark.
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  std::vector<learn::HistoryRecord> hist;
  for (int t = 0; t < 16; ++t) {
    double price = 10.0 + t;
    if (price > 25.0) price = 25.0;
    auto d = opf::solve_distribution(sys.dns[0], 0, price, opt.dn_options());
    learn::HistoryRecord r;
    r.hour = t;
    r.dn_id = sys.dns[0].net.id;
    r.context = coord::context_for(sys, 0, 0);
    r.context[0] += 0.001 * t;
    r.lambda = price;
    r.intake_mw = d.import_mw;
    hist.push_back(r);
  }
  std::vector<opf::DnModel> models;
  auto rep = coord::evaluate_hour(strategy(StrategyKind::kPriceAware, 16, 8),
                                  sys, 0, hist, opt, &models);
  REQUIRE(models.size() == 1);
  CHECK(models[0].kind == opf::DnModelKind::kBid);
  CHECK(models[0].bid.blocks.size() >= 1);
  REQUIRE(rep.delta_pct.has_value());
  // The bid discretizes a smooth demand curve: small but nonzero error.
  CHECK(*rep.delta_pct <= 8.0);
  auto bn = coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0,
                                 {}, opt);
  CHECK(rep.sw_total <= bn.sw_total + 1e-9 * std::abs(bn.sw_total));
}

TEST_CASE("benchmark dominates misforecast strategies on welfare") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  auto bn = coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0,
                                 {}, opt);
  // A deliberately bad forecast: the feeder truly responds to its price.
  auto hist = flat_history(sys, 42.0);
  auto pag = coord::evaluate_hour(strategy(StrategyKind::kPriceAgnostic), sys,
                                  0, hist, opt);
  CHECK(bn.sw_total >= pag.sw_total - 1e-6 * std::abs(bn.sw_total));
  REQUIRE(pag.delta_pct.has_value());
  CHECK(*pag.delta_pct > 1.0);
}

TEST_CASE("responses at the price extremes hit the demand band edges") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options().dn_options();
  // Prices beyond the band saturate the curve with the bound crisply
  // active, so the solver pins the edge exactly.
  auto lo = coord::actual_dn_response(sys, 0, {5.0}, opt);
  CHECK(lo.dispatches[0].import_mw == doctest::Approx(15.0).epsilon(1e-6));
  auto hi = coord::actual_dn_response(sys, 0, {40.0}, opt);
  CHECK(hi.dispatches[0].import_mw == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(lo.sw_d ==
        doctest::Approx(lo.dispatches[0].welfare_at_price).epsilon(1e-12));
}

TEST_CASE("welfare allocation is zero against itself and sums to the total") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  std::vector<coord::HourReport> bn = {
      coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0, {}, opt)};
  auto self = coord::welfare_allocation(bn, bn);
  CHECK(self.tso_pct == doctest::Approx(0.0).scale(1.0));
  CHECK(self.dso_pct == doctest::Approx(0.0).scale(1.0));

  auto hist = flat_history(sys, 42.0);
  std::vector<coord::HourReport> pag = {coord::evaluate_hour(
      strategy(StrategyKind::kPriceAgnostic), sys, 0, hist, opt)};
  auto shares = coord::welfare_allocation(pag, bn);
  double total = 100.0 * (bn[0].sw_total - pag[0].sw_total) / bn[0].sw_total;
  CHECK(shares.tso_pct + shares.dso_pct == doctest::Approx(total).epsilon(1e-9));

  CHECK_THROWS_AS(coord::welfare_allocation(pag, {}), ValidationError);
}

TEST_CASE("redispatch reacts to the realized intake") {
  auto sys = fixtures::two_bus_with_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::clearing_options();
  auto hist = flat_history(sys, 42.0);
  auto rep = coord::evaluate_hour(strategy(StrategyKind::kPriceAgnostic), sys,
                                  0, hist, opt);
  CHECK(rep.forecast_mw == doctest::Approx(42.0).epsilon(1e-6));
  // Posted price with 42 MW assumed: 10 + 0.02*(50+42); the feeder then
  // draws (65 - 2*11.84)/3 instead.
  CHECK(rep.dns[0].lambda == doctest::Approx(11.84).epsilon(1e-6));
  CHECK(rep.actual_mw == doctest::Approx(41.32 / 3.0).epsilon(1e-5));
  CHECK(rep.slack_mw <= 1e-6);

  // Realized welfare sits strictly below the benchmark: the response moved
  // roughly 0.37 MW off the first-best point, a ~0.1 quadratic loss.
  auto bn = coord::evaluate_hour(strategy(StrategyKind::kBenchmark), sys, 0,
                                 {}, opt);
  CHECK(bn.sw_total - rep.sw_total > 0.01);
  CHECK(bn.sw_total - rep.sw_total < 1.0);
}
