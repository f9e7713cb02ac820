// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "fixtures.hpp"
#include "opf/distribution.hpp"

using namespace tdcoord;

TEST_CASE("leaf consumer follows its demand curve") {
  auto dn = fixtures::leaf_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::dn_options();

  // alpha = 65/3, beta = 2/3; probes sit strictly inside the price band so
  // no bound is active at its degeneracy point.
  auto low = opf::solve_distribution(dn, 0, 12.5, opt);
  CHECK(low.import_mw == doctest::Approx(40.0 / 3.0).epsilon(1e-6));
  auto high = opf::solve_distribution(dn, 0, 20.0, opt);
  CHECK(high.import_mw == doctest::Approx(25.0 / 3.0).epsilon(1e-6));
  auto mid = opf::solve_distribution(dn, 0, 17.5, opt);
  CHECK(mid.import_mw == doctest::Approx(10.0).epsilon(1e-6));

  for (const auto* d : {&low, &high, &mid})
    CHECK(opf::distribution_violation(dn, 0, *d, opt) <= 1e-6);

  CHECK(mid.p_con[0] == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(mid.q_con[0] == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(mid.utility_total == doctest::Approx(106.25).epsilon(1e-6));
  CHECK(mid.cost_total == doctest::Approx(0.0).scale(1.0));
  CHECK(mid.welfare_at_price ==
        doctest::Approx(mid.utility_total - mid.cost_total -
                        17.5 * mid.import_mw)
            .epsilon(1e-9));
}

TEST_CASE("voltage drop follows the linearized branch flow") {
  auto dn = fixtures::leaf_dn(10.0, 0.5, 0.3, 0.02, 0.015);
  auto opt = fixtures::dn_options();
  auto d = opf::solve_distribution(dn, 0, 10.0, opt);
  REQUIRE(d.v2.size() == 2);
  CHECK(d.v2[0] == doctest::Approx(1.0).epsilon(1e-9));
  double drop = 2.0 * (0.02 * d.p_flow[0] + 0.015 * d.q_flow[0]) / 100.0;
  CHECK(d.v2[1] == doctest::Approx(1.0 - drop).epsilon(1e-7));
  CHECK(d.p_flow[0] == doctest::Approx(d.import_mw).epsilon(1e-6));
}

TEST_CASE("binding lower voltage limit curtails consumption") {
  // Impedances large enough that the demand curve alone would violate the
  // 0.81 p.u.^2 floor: the import settles exactly on the voltage budget
  // p = (v0 - vmin) * sB / (2 (r + x*gamma)).
  auto dn = fixtures::leaf_dn(10.0, 0.5, 0.3, 1.0, 2.0);
  auto opt = fixtures::dn_options();
  auto d = opf::solve_distribution(dn, 0, 10.0, opt);
  double cap = 0.19 * 100.0 / (2.0 * (1.0 + 2.0 * 0.3));
  CHECK(d.import_mw == doctest::Approx(cap).epsilon(1e-5));
  CHECK(d.v2[1] == doctest::Approx(0.81).epsilon(1e-7));
  CHECK(d.import_mw < 15.0 - 1e-3);
  CHECK(opf::distribution_violation(dn, 0, d, opt) <= 1e-6);
}

TEST_CASE("free local generation turns the feeder into an exporter") {
  auto dn = fixtures::leaf_dn(15.0, 0.0, 0.0);
  dn.net.generators.push_back({"s1", 1, 0.0, 0.0, 0.0, 20.0, -6.0, 6.0,
                               std::nullopt, grid::GenKind::kSolar, {1.0}});
  dn.layout = grid::analyze_radial(dn.net, 0);
  auto opt = fixtures::dn_options();
  for (double price : {10.0, 17.5, 25.0}) {
    auto d = opf::solve_distribution(dn, 0, price, opt);
    CHECK(d.import_mw == doctest::Approx(-5.0).epsilon(1e-6));
    CHECK(d.p_gen[0] == doctest::Approx(20.0).epsilon(1e-6));
    CHECK(opf::distribution_violation(dn, 0, d, opt) <= 1e-6);
  }
}

TEST_CASE("capacity factor scales the generation ceiling") {
  auto dn = fixtures::leaf_dn(15.0, 0.0, 0.0);
  dn.net.generators.push_back({"s1", 1, 0.0, 0.0, 0.0, 20.0, -6.0, 6.0,
                               std::nullopt, grid::GenKind::kSolar, {0.25}});
  dn.layout = grid::analyze_radial(dn.net, 0);
  auto d = opf::solve_distribution(dn, 0, 25.0, fixtures::dn_options());
  CHECK(d.p_gen[0] == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(d.import_mw == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("inverter disk limits apparent power") {
  auto dn = fixtures::leaf_dn(15.0, 0.0, 0.6);
  // Reactive-hungry load forces the solar inverter against its MVA disk.
  dn.net.generators.push_back({"s1", 1, 0.0, 0.0, 0.0, 20.0, -20.0, 20.0,
                               10.0, grid::GenKind::kSolar, {1.0}});
  dn.layout = grid::analyze_radial(dn.net, 0);
  auto opt = fixtures::dn_options();
  auto d = opf::solve_distribution(dn, 0, 25.0, opt);
  double apparent = std::hypot(d.p_gen[0], d.q_gen[0]);
  CHECK(apparent <= 10.0 + 1e-6);
  CHECK(d.p_gen[0] < 20.0 - 1e-6);
  CHECK(opf::distribution_violation(dn, 0, d, opt) <= 1e-6);

  // The polygonal feasible set is inscribed: tightening sides approaches
  // the disk from inside.
  auto coarse_opt = opt;
  coarse_opt.polygon_sides = 4;
  auto coarse = opf::solve_distribution(dn, 0, 25.0, coarse_opt);
  CHECK(std::hypot(coarse.p_gen[0], coarse.q_gen[0]) <= 10.0 + 1e-6);
  CHECK(coarse.p_gen[0] <= d.p_gen[0] + 1e-6);
}

TEST_CASE("infeasible feeder raises a solver error") {
  // Fixed load behind a line whose rating cannot carry it.
  auto dn = fixtures::leaf_dn(50.0, 0.0, 0.0);
  dn.net.lines[0].s_max = 1.0;
  dn.layout = grid::analyze_radial(dn.net, 0);
  CHECK_THROWS_AS(opf::solve_distribution(dn, 0, 17.5, fixtures::dn_options()),
                  SolverError);
}

TEST_CASE("prices beyond the anchor band saturate the response") {
  auto dn = fixtures::leaf_dn(10.0, 0.5, 0.3);
  auto opt = fixtures::dn_options();
  auto below = opf::solve_distribution(dn, 0, 5.0, opt);
  CHECK(below.import_mw == doctest::Approx(15.0).epsilon(1e-6));
  auto above = opf::solve_distribution(dn, 0, 40.0, opt);
  CHECK(above.import_mw == doctest::Approx(5.0).epsilon(1e-6));
}
