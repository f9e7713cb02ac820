// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tdcoord::grid {

enum class GenKind { kThermal, kWind, kSolar };

const char* to_string(GenKind k);
GenKind gen_kind_from_string(const std::string& s);

struct Bus {
  std::string id;
  double vmin2 = 0.0;  // squared voltage bounds, p.u.^2
  double vmax2 = 0.0;
};

struct Line {
  std::string id;
  int from = -1;  // node indices within the owning network
  int to = -1;
  double r = 0.0;  // p.u. on the system base
  double x = 0.0;
  double s_max = 0.0;  // MVA
};

struct Generator {
  std::string id;
  int bus = -1;
  double a = 0.0;  // marginal cost a*p + b, cost 0.5*a*p^2 + b*p
  double b = 0.0;
  double p_min = 0.0, p_max = 0.0;
  double q_min = 0.0, q_max = 0.0;
  std::optional<double> inverter_mva;  // apparent-power disk radius
  GenKind kind = GenKind::kThermal;
  std::vector<double> capacity_factor;  // per hour; 1.0 for thermal

  double p_cap(int t) const { return p_max * capacity_factor[t]; }
};

struct Consumer {
  std::string id;
  int bus = -1;
  double delta = 0.0;  // flexible share of baseline demand
  double gamma = 0.0;  // reactive-to-active ratio q = gamma*p
  std::vector<double> baseline;  // MW per hour
};

// One voltage level: the transmission grid or a single distribution feeder.
struct Network {
  std::string id;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<Consumer> consumers;

  int find_bus(const std::string& bus_id) const;  // -1 when absent
};

// Tree structure of a radial network, rooted at the substation node.
struct RadialLayout {
  std::vector<int> parent;       // -1 for the root
  std::vector<int> parent_line;  // line connecting node to its parent
  std::vector<int> line_sign;    // +1 if that line is stored parent->child
  std::vector<int> bfs_order;    // root first
};

// Breadth-first analysis of the tree rooted at `root`. Throws
// ValidationError when the network is not a tree (cycles, parallel edges,
// self-loops, or unreachable nodes).
RadialLayout analyze_radial(const Network& net, int root);

struct Distribution {
  Network net;
  int host_bus = -1;  // transmission bus index
  int root = -1;      // substation node index within net
  RadialLayout layout;
};

struct PowerSystem {
  double base_mva = 100.0;
  double lambda_lo = 0.0;  // price floor
  double lambda_hi = 0.0;  // price cap
  int slack_bus = -1;      // transmission angle reference
  Network transmission;
  std::vector<Distribution> dns;
  int horizon = 0;  // hours covered by every time series
};

// Full structural and numeric consistency check; throws ValidationError
// with the offending entity named. Also (re)derives each DN's radial
// layout.
void validate_system(PowerSystem& sys);

// True if the network is connected when its lines are taken as undirected
// edges (trivially true for a single bus).
bool is_connected(const Network& net);

}  // namespace tdcoord::grid
