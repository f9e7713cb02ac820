// SPDX-License-Identifier: Apache-2.0
#include "sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/rand.hpp"

namespace tdcoord::sim {
namespace {

constexpr double kPi = 3.14159265358979323846;

double demand_shape(int t, double phase) {
  int h = t % 24;
  int day = t / 24;
  double s = 1.0 + 0.28 * std::cos(2.0 * kPi * (h - 19) / 24.0) +
             0.05 * std::sin(2.0 * kPi * t / 161.0 + phase);
  if (day % 7 >= 5) s -= 0.10;
  return s;
}

double daylight(int t) {
  int h = t % 24;
  if (h <= 6 || h >= 20) return 0.0;
  double c = std::cos(kPi * (h - 13) / 14.0);
  return c > 0.0 ? std::pow(c, 1.3) : 0.0;
}

double wind_profile(int t, double jitter) {
  double w = 0.42 + 0.28 * std::sin(2.0 * kPi * t / 89.0 + 0.7) +
             0.18 * std::sin(2.0 * kPi * t / 31.0 + 2.1) +
             0.08 * std::sin(2.0 * kPi * t / 7.3 + 4.0) + jitter;
  return std::clamp(w, 0.02, 0.98);
}

struct DnTemplate {
  int host;               // transmission bus index
  double impedance = 1.0; // feeder-specific multipliers
  double demand = 1.0;
};

}  // namespace

ScenarioSpec read_scenario_spec(const std::filesystem::path& config) {
  ScenarioSpec spec;
  auto kv = csv::read_key_values(config);
  for (const auto& [key, value] : kv) {
    const std::string ctx = "scenario config " + config.string() + ": " + key;
    if (key == "horizon")
      spec.horizon = static_cast<int>(csv::parse_int(value, ctx));
    else if (key == "dns")
      spec.dn_count = static_cast<int>(csv::parse_int(value, ctx));
    else if (key == "seed")
      spec.seed = static_cast<std::uint64_t>(csv::parse_int(value, ctx));
    else
      throw ValidationError("scenario config: unknown key " + key);
  }
  if (spec.horizon < 1) throw ValidationError("scenario config: horizon must be >= 1");
  if (spec.dn_count < 1) throw ValidationError("scenario config: dns must be >= 1");
  return spec;
}

grid::PowerSystem generate_scenario(const ScenarioSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const int horizon = spec.horizon;
  const int days = (horizon + 23) / 24;

  grid::PowerSystem sys;
  sys.base_mva = 100.0;
  sys.lambda_lo = 10.0;
  sys.lambda_hi = 25.0;
  sys.horizon = horizon;

  grid::Network& tx = sys.transmission;
  tx.id = "tx";
  for (int i = 1; i <= 6; ++i)
    tx.buses.push_back({"b" + std::to_string(i), 0.81, 1.21});
  auto tx_line = [&](const std::string& id, int from, int to, double x) {
    tx.lines.push_back({id, from, to, 0.008, x, 500.0});
  };
  tx_line("l1", 0, 1, 0.06);
  tx_line("l2", 1, 2, 0.07);
  tx_line("l3", 2, 3, 0.08);
  tx_line("l4", 3, 4, 0.07);
  tx_line("l5", 4, 5, 0.06);
  tx_line("l6", 5, 0, 0.08);
  tx_line("l7", 1, 4, 0.10);
  sys.slack_bus = 0;

  grid::Generator g1{"g1", 0, 0.02, 12.0, 0.0, 400.0, -150.0, 150.0,
                     std::nullopt, grid::GenKind::kThermal, {}};
  grid::Generator g2{"g2", 3, 0.035, 16.0, 0.0, 250.0, -100.0, 100.0,
                     std::nullopt, grid::GenKind::kThermal, {}};
  grid::Generator w1{"w1", 5, 0.0, 0.0, 0.0, 150.0, -50.0, 50.0,
                     std::nullopt, grid::GenKind::kWind, {}};
  g1.capacity_factor.assign(horizon, 1.0);
  g2.capacity_factor.assign(horizon, 1.0);
  w1.capacity_factor.resize(horizon);

  double tc1_phase = uniform(rng, 0.0, 2.0 * kPi);
  double tc2_phase = uniform(rng, 0.0, 2.0 * kPi);
  grid::Consumer tc1{"tc1", 2, 0.55, 0.30, {}};
  grid::Consumer tc2{"tc2", 4, 0.60, 0.25, {}};
  tc1.baseline.resize(horizon);
  tc2.baseline.resize(horizon);

  const std::vector<DnTemplate> templates = {
      {1, 1.00, 1.00}, {2, 1.12, 0.88}, {4, 0.92, 1.15},
      {5, 1.05, 0.95}, {0, 0.96, 1.08}, {3, 1.08, 0.92},
  };

  struct FeederDraw {
    double phase = 0.0;
    std::vector<double> scale, delta, gamma;  // per consumer
    double solar1 = 0.0, solar2 = 0.0;
    std::vector<double> cloud;  // per day
  };
  std::vector<FeederDraw> draws(spec.dn_count);
  for (int d = 0; d < spec.dn_count; ++d) {
    FeederDraw& fd = draws[d];
    fd.phase = uniform(rng, 0.0, 2.0 * kPi);
    const double df = templates[d % templates.size()].demand;
    for (int c = 0; c < 7; ++c) {
      fd.scale.push_back(uniform(rng, 2.2, 4.2) * df);
      fd.delta.push_back(uniform(rng, 0.5, 0.75));
      fd.gamma.push_back(uniform(rng, 0.25, 0.40));
    }
    fd.solar1 = uniform(rng, 4.0, 4.8) * df;
    fd.solar2 = uniform(rng, 3.0, 3.6) * df;
    for (int day = 0; day < days; ++day) fd.cloud.push_back(uniform(rng, 0.55, 1.0));
  }

  for (int d = 0; d < spec.dn_count; ++d) {
    const DnTemplate& tpl = templates[d % templates.size()];
    const FeederDraw& fd = draws[d];
    const std::string tag = "d" + std::to_string(d + 1);
    grid::Distribution dn;
    dn.host_bus = tpl.host;
    dn.root = 0;
    dn.net.id = tag;
    for (int n = 0; n < 8; ++n)
      dn.net.buses.push_back({tag + "_n" + std::to_string(n), 0.9025, 1.1025});
    auto dn_line = [&](int idx, int from, int to, double r, double x, double cap) {
      dn.net.lines.push_back({tag + "_l" + std::to_string(idx), from, to,
                              r * tpl.impedance, x * tpl.impedance, cap});
    };
    dn_line(1, 0, 1, 0.090, 0.060, 60.0);
    dn_line(2, 1, 2, 0.080, 0.055, 60.0);
    dn_line(3, 2, 3, 0.070, 0.050, 60.0);
    dn_line(4, 3, 4, 0.060, 0.040, 60.0);
    dn_line(5, 1, 5, 0.070, 0.045, 25.0);
    dn_line(6, 2, 6, 0.065, 0.045, 25.0);
    dn_line(7, 3, 7, 0.060, 0.040, 25.0);

    auto add_solar = [&](int idx, int node, double pmax) {
      grid::Generator s{tag + "_s" + std::to_string(idx), node, 0.0, 0.0,
                        0.0,  pmax, -0.6 * pmax, 0.6 * pmax,
                        1.02 * pmax, grid::GenKind::kSolar, {}};
      s.capacity_factor.resize(horizon);
      dn.net.generators.push_back(std::move(s));
    };
    add_solar(1, 4, fd.solar1);
    add_solar(2, 6, fd.solar2);

    for (int c = 0; c < 7; ++c) {
      grid::Consumer con{tag + "_c" + std::to_string(c + 1), c + 1,
                         fd.delta[c], fd.gamma[c], {}};
      con.baseline.resize(horizon);
      dn.net.consumers.push_back(std::move(con));
    }
    sys.dns.push_back(std::move(dn));
  }

  for (int t = 0; t < horizon; ++t) {
    tc1.baseline[t] = 90.0 * demand_shape(t, tc1_phase);
    tc2.baseline[t] = 70.0 * demand_shape(t, tc2_phase);
    w1.capacity_factor[t] = wind_profile(t, 0.06 * (u01(rng) - 0.5));
    for (int d = 0; d < spec.dn_count; ++d) {
      const FeederDraw& fd = draws[d];
      double shape = demand_shape(t, fd.phase);
      for (int c = 0; c < 7; ++c)
        sys.dns[d].net.consumers[c].baseline[t] = fd.scale[c] * shape;
      double cf = daylight(t) * fd.cloud[t / 24] * (0.93 + 0.07 * u01(rng));
      for (auto& gen : sys.dns[d].net.generators) gen.capacity_factor[t] = cf;
    }
  }

  tx.generators = {std::move(g1), std::move(g2), std::move(w1)};
  tx.consumers = {std::move(tc1), std::move(tc2)};

  grid::validate_system(sys);
  return sys;
}

}  // namespace tdcoord::sim
