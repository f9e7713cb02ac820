// SPDX-License-Identifier: Apache-2.0
#include "grid/model.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <unordered_set>

#include "core/error.hpp"

namespace tdcoord::grid {

const char* to_string(GenKind k) {
  switch (k) {
    case GenKind::kThermal: return "thermal";
    case GenKind::kWind: return "wind";
    case GenKind::kSolar: return "solar";
  }
  return "unknown";
}

GenKind gen_kind_from_string(const std::string& s) {
  if (s == "thermal") return GenKind::kThermal;
  if (s == "wind") return GenKind::kWind;
  if (s == "solar") return GenKind::kSolar;
  throw ValidationError("unknown generator kind '" + s + "'");
}

int Network::find_bus(const std::string& bus_id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return static_cast<int>(i);
  return -1;
}

RadialLayout analyze_radial(const Network& net, int root) {
  const int n = static_cast<int>(net.buses.size());
  const int nl = static_cast<int>(net.lines.size());
  if (root < 0 || root >= n)
    throw ValidationError(net.id + ": root node index out of range");
  if (nl != n - 1)
    throw ValidationError(net.id + ": radial network needs exactly " +
                          std::to_string(n - 1) + " lines, has " +
                          std::to_string(nl));
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, line)
  for (int l = 0; l < nl; ++l) {
    const Line& ln = net.lines[l];
    if (ln.from == ln.to)
      throw ValidationError(net.id + ": line " + ln.id + " is a self-loop");
    adj[ln.from].push_back({ln.to, l});
    adj[ln.to].push_back({ln.from, l});
  }
  RadialLayout lay;
  lay.parent.assign(n, -2);
  lay.parent_line.assign(n, -1);
  lay.line_sign.assign(n, 0);
  lay.parent[root] = -1;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    lay.bfs_order.push_back(u);
    for (auto [v, l] : adj[u]) {
      if (lay.parent[v] != -2) {
        if (v != lay.parent[u] || l != lay.parent_line[u])
          throw ValidationError(net.id + ": cycle through line " +
                                net.lines[l].id);
        continue;
      }
      lay.parent[v] = u;
      lay.parent_line[v] = l;
      lay.line_sign[v] = net.lines[l].from == u ? 1 : -1;
      queue.push_back(v);
    }
  }
  if (static_cast<int>(lay.bfs_order.size()) != n)
    throw ValidationError(net.id + ": network is not connected");
  return lay;
}

bool is_connected(const Network& net) {
  const int n = static_cast<int>(net.buses.size());
  if (n <= 1) return true;
  std::vector<std::vector<int>> adj(n);
  for (const Line& ln : net.lines) {
    adj[ln.from].push_back(ln.to);
    adj[ln.to].push_back(ln.from);
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int count = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    ++count;
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
  }
  return count == n;
}

namespace {

void check_network_topology(const Network& net) {
  const int n = static_cast<int>(net.buses.size());
  if (n == 0) throw ValidationError(net.id + ": no buses");
  std::unordered_set<std::string> bus_ids;
  for (const Bus& b : net.buses) {
    if (!bus_ids.insert(b.id).second)
      throw ValidationError(net.id + ": duplicate bus id " + b.id);
    if (!(b.vmin2 >= 0.0) || !(b.vmax2 >= b.vmin2))
      throw ValidationError(net.id + ": bus " + b.id +
                            " needs 0 <= vmin2 <= vmax2");
  }
  for (const Line& ln : net.lines) {
    if (ln.from < 0 || ln.from >= n || ln.to < 0 || ln.to >= n)
      throw ValidationError(net.id + ": line " + ln.id + " endpoint out of range");
    if (!(ln.x > 0.0))
      throw ValidationError(net.id + ": line " + ln.id + " needs x > 0");
    if (!(ln.r >= 0.0))
      throw ValidationError(net.id + ": line " + ln.id + " needs r >= 0");
    if (!(ln.s_max > 0.0))
      throw ValidationError(net.id + ": line " + ln.id + " needs smax > 0");
  }
  for (const Generator& g : net.generators) {
    if (g.bus < 0 || g.bus >= n)
      throw ValidationError(net.id + ": generator " + g.id + " bus out of range");
    if (!(g.a >= 0.0) || !(g.b >= 0.0))
      throw ValidationError(net.id + ": generator " + g.id +
                            " needs convex non-negative cost (a, b >= 0)");
    if (!(g.p_min <= g.p_max) || !(g.q_min <= g.q_max))
      throw ValidationError(net.id + ": generator " + g.id + " has inverted limits");
    if (g.inverter_mva && !(*g.inverter_mva > 0.0))
      throw ValidationError(net.id + ": generator " + g.id +
                            " inverter rating must be positive");
    if (g.kind != GenKind::kThermal && (g.a != 0.0 || g.b != 0.0))
      throw ValidationError(net.id + ": renewable generator " + g.id +
                            " must have zero marginal cost");
  }
  for (const Consumer& c : net.consumers) {
    if (c.bus < 0 || c.bus >= n)
      throw ValidationError(net.id + ": consumer " + c.id + " bus out of range");
    if (!(c.delta >= 0.0 && c.delta <= 1.0))
      throw ValidationError(net.id + ": consumer " + c.id +
                            " flexibility share outside [0, 1]");
    if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma))
      throw ValidationError(net.id + ": consumer " + c.id + " needs gamma >= 0");
  }
}

void check_series(const Network& net, int horizon, const std::string& sys_id) {
  for (const Generator& g : net.generators) {
    if (static_cast<int>(g.capacity_factor.size()) != horizon)
      throw ValidationError(sys_id + ": generator " + g.id +
                            " capacity factor series length mismatch");
    for (double v : g.capacity_factor) {
      if (g.kind == GenKind::kThermal && v != 1.0)
        throw ValidationError(sys_id + ": thermal generator " + g.id +
                              " must have capacity factor 1");
      if (!(v >= 0.0 && v <= 1.0))
        throw ValidationError(sys_id + ": generator " + g.id +
                              " capacity factor outside [0, 1]");
    }
  }
  for (const Consumer& c : net.consumers) {
    if (static_cast<int>(c.baseline.size()) != horizon)
      throw ValidationError(sys_id + ": consumer " + c.id +
                            " baseline series length mismatch");
    for (double v : c.baseline)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError(sys_id + ": consumer " + c.id +
                              " baseline must be >= 0");
  }
}

}  // namespace

void validate_system(PowerSystem& sys) {
  if (!(sys.base_mva > 0.0))
    throw ValidationError("system: base_mva must be positive");
  if (!(sys.lambda_hi > sys.lambda_lo) || !(sys.lambda_lo >= 0.0))
    throw ValidationError("system: need price cap > price floor >= 0");
  if (sys.horizon < 1) throw ValidationError("system: empty time series");

  check_network_topology(sys.transmission);
  if (sys.slack_bus < 0 ||
      sys.slack_bus >= static_cast<int>(sys.transmission.buses.size()))
    throw ValidationError("system: slack bus out of range");
  if (!is_connected(sys.transmission))
    throw ValidationError("transmission: network is not connected");
  check_series(sys.transmission, sys.horizon, "transmission");

  std::unordered_set<std::string> entity_ids;
  auto claim = [&entity_ids](const std::string& id) {
    if (!entity_ids.insert(id).second)
      throw ValidationError("system: duplicate entity id " + id);
  };
  for (const auto& g : sys.transmission.generators) claim(g.id);
  for (const auto& c : sys.transmission.consumers) claim(c.id);

  std::unordered_set<std::string> dn_ids;
  for (Distribution& dn : sys.dns) {
    if (!dn_ids.insert(dn.net.id).second)
      throw ValidationError("system: duplicate feeder id " + dn.net.id);
    check_network_topology(dn.net);
    if (dn.host_bus < 0 ||
        dn.host_bus >= static_cast<int>(sys.transmission.buses.size()))
      throw ValidationError(dn.net.id + ": host bus out of range");
    dn.layout = analyze_radial(dn.net, dn.root);
    check_series(dn.net, sys.horizon, dn.net.id);
    for (const auto& g : dn.net.generators) claim(g.id);
    for (const auto& c : dn.net.consumers) claim(c.id);
  }
}

}  // namespace tdcoord::grid
