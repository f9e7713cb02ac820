// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hand-built miniature systems shared across the test suites.

#include <optional>
#include <vector>

#include "grid/model.hpp"
#include "opf/distribution.hpp"
#include "opf/transmission.hpp"

namespace fixtures {

using namespace tdcoord;

inline opf::DnOptions dn_options() {
  opf::DnOptions opt;
  opt.lambda_lo = 10.0;
  opt.lambda_hi = 25.0;
  return opt;
}

inline opf::ClearingOptions clearing_options() {
  opf::ClearingOptions opt;
  opt.lambda_lo = 10.0;
  opt.lambda_hi = 25.0;
  return opt;
}

// Two transmission buses joined by one line, a quadratic-cost generator at
// bus 1 and a fixed 50 MW load at bus 2. With the line wide open the
// marginal cost at 50 MW is 10 + 0.02*50 = 11. Passing line_mva = 30 and
// with_second_gen = true reproduces the congested case whose prices are
// 10.6 and 20.
inline grid::PowerSystem two_bus(double line_mva = 100.0,
                                 bool with_second_gen = false) {
  grid::PowerSystem sys;
  sys.base_mva = 100.0;
  sys.lambda_lo = 10.0;
  sys.lambda_hi = 25.0;
  sys.slack_bus = 0;
  sys.horizon = 1;
  grid::Network& tx = sys.transmission;
  tx.id = "transmission";
  tx.buses = {{"b1", 0.81, 1.21}, {"b2", 0.81, 1.21}};
  tx.lines = {{"l1", 0, 1, 0.01, 0.1, line_mva}};
  tx.generators = {{"g1", 0, 0.02, 10.0, 0.0, 200.0, -100.0, 100.0,
                    std::nullopt, grid::GenKind::kThermal, {1.0}}};
  if (with_second_gen)
    tx.generators.push_back({"g2", 1, 0.0, 20.0, 0.0, 200.0, -100.0, 100.0,
                             std::nullopt, grid::GenKind::kThermal, {1.0}});
  tx.consumers = {{"c1", 1, 0.0, 0.0, {50.0}}};
  grid::validate_system(sys);
  return sys;
}

// Root plus one consumer node; limits wide enough that only the demand
// curve is active.
inline grid::Distribution leaf_dn(double baseline, double delta, double gamma,
                                  double r = 0.01, double x = 0.008) {
  grid::Distribution dn;
  dn.net.id = "d1";
  dn.host_bus = 1;
  dn.root = 0;
  dn.net.buses = {{"d1_n0", 0.81, 1.21}, {"d1_n1", 0.81, 1.21}};
  dn.net.lines = {{"d1_l1", 0, 1, r, x, 1e8}};
  dn.net.consumers = {{"d1_c1", 1, delta, gamma, {baseline}}};
  dn.layout = grid::analyze_radial(dn.net, 0);
  return dn;
}

// two_bus plus a flexible-consumer feeder hosted at bus 2.
inline grid::PowerSystem two_bus_with_dn(double baseline = 10.0,
                                         double delta = 0.5,
                                         double gamma = 0.3) {
  grid::PowerSystem sys = two_bus();
  grid::Distribution dn = leaf_dn(baseline, delta, gamma);
  dn.host_bus = 1;
  sys.dns.push_back(dn);
  grid::validate_system(sys);
  return sys;
}

}  // namespace fixtures
