// SPDX-License-Identifier: Apache-2.0
#include "grid/io.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace tdcoord::grid {

namespace {

constexpr const char* kTransmission = "transmission";

struct NetworkRef {
  bool is_dn = false;
  int dn_index = -1;
};

std::string get_key(const std::unordered_map<std::string, std::string>& cfg,
                    const std::string& key) {
  auto it = cfg.find(key);
  if (it == cfg.end())
    throw ValidationError("config.txt: missing key '" + key + "'");
  return it->second;
}

}  // namespace

PowerSystem load_system(const std::filesystem::path& dir) {
  auto cfg = csv::read_key_values(dir / "config.txt");
  PowerSystem sys;
  sys.base_mva = csv::parse_double(get_key(cfg, "base_mva"), "config base_mva");
  sys.lambda_lo = csv::parse_double(get_key(cfg, "lambda_lo"), "config lambda_lo");
  sys.lambda_hi = csv::parse_double(get_key(cfg, "lambda_hi"), "config lambda_hi");

  csv::Table buses = csv::Table::read_file(dir / "buses.csv");
  buses.require_columns({"id", "system", "vmin2", "vmax2"});
  sys.transmission.id = kTransmission;
  std::unordered_map<std::string, NetworkRef> nets;
  nets[kTransmission] = {false, -1};
  for (std::size_t r = 0; r < buses.rows(); ++r) {
    const std::string& system = buses.cell(r, "system");
    auto it = nets.find(system);
    if (it == nets.end()) {
      sys.dns.push_back({});
      sys.dns.back().net.id = system;
      it = nets.emplace(system,
                        NetworkRef{true, static_cast<int>(sys.dns.size()) - 1})
               .first;
    }
    Network& net = it->second.is_dn ? sys.dns[it->second.dn_index].net
                                    : sys.transmission;
    net.buses.push_back(
        {buses.cell(r, "id"), buses.number(r, "vmin2"), buses.number(r, "vmax2")});
  }
  // The dns vector may have grown; refresh pointers through indices only.
  auto net_of = [&](const std::string& system, const std::string& ctx) -> Network& {
    auto it = nets.find(system);
    if (it == nets.end())
      throw ValidationError(ctx + ": unknown system '" + system + "'");
    return it->second.is_dn ? sys.dns[it->second.dn_index].net : sys.transmission;
  };

  csv::Table lines = csv::Table::read_file(dir / "lines.csv");
  lines.require_columns({"id", "system", "from", "to", "r", "x", "smax"});
  for (std::size_t r = 0; r < lines.rows(); ++r) {
    Network& net = net_of(lines.cell(r, "system"), lines.row_context(r));
    Line ln;
    ln.id = lines.cell(r, "id");
    ln.from = net.find_bus(lines.cell(r, "from"));
    ln.to = net.find_bus(lines.cell(r, "to"));
    if (ln.from < 0 || ln.to < 0)
      throw ValidationError(lines.row_context(r) + ": endpoint bus not in system '" +
                            net.id + "'");
    ln.r = lines.number(r, "r");
    ln.x = lines.number(r, "x");
    ln.s_max = lines.number(r, "smax");
    net.lines.push_back(std::move(ln));
  }

  csv::Table gens = csv::Table::read_file(dir / "generators.csv");
  gens.require_columns({"id", "system", "bus", "a", "b", "pmin", "pmax", "qmin",
                        "qmax", "sinv", "kind"});
  for (std::size_t r = 0; r < gens.rows(); ++r) {
    Network& net = net_of(gens.cell(r, "system"), gens.row_context(r));
    Generator g;
    g.id = gens.cell(r, "id");
    g.bus = net.find_bus(gens.cell(r, "bus"));
    if (g.bus < 0)
      throw ValidationError(gens.row_context(r) + ": bus not in system '" +
                            net.id + "'");
    g.a = gens.number(r, "a");
    g.b = gens.number(r, "b");
    g.p_min = gens.number(r, "pmin");
    g.p_max = gens.number(r, "pmax");
    g.q_min = gens.number(r, "qmin");
    g.q_max = gens.number(r, "qmax");
    if (!gens.empty_cell(r, "sinv")) g.inverter_mva = gens.number(r, "sinv");
    g.kind = gen_kind_from_string(gens.cell(r, "kind"));
    net.generators.push_back(std::move(g));
  }

  csv::Table cons = csv::Table::read_file(dir / "consumers.csv");
  cons.require_columns({"id", "system", "bus", "delta", "gamma"});
  for (std::size_t r = 0; r < cons.rows(); ++r) {
    Network& net = net_of(cons.cell(r, "system"), cons.row_context(r));
    Consumer c;
    c.id = cons.cell(r, "id");
    c.bus = net.find_bus(cons.cell(r, "bus"));
    if (c.bus < 0)
      throw ValidationError(cons.row_context(r) + ": bus not in system '" +
                            net.id + "'");
    c.delta = cons.number(r, "delta");
    c.gamma = cons.number(r, "gamma");
    net.consumers.push_back(std::move(c));
  }

  // Time series: every row targets one entity field; coverage must be a
  // complete 0..H-1 range per series.
  std::unordered_map<std::string, Generator*> gen_by_id;
  std::unordered_map<std::string, Consumer*> con_by_id;
  auto register_net = [&](Network& net) {
    for (auto& g : net.generators) gen_by_id[g.id] = &g;
    for (auto& c : net.consumers) con_by_id[c.id] = &c;
  };
  register_net(sys.transmission);
  for (auto& dn : sys.dns) register_net(dn.net);

  csv::Table ts = csv::Table::read_file(dir / "timeseries.csv");
  ts.require_columns({"hour", "entity_id", "field", "value"});
  std::unordered_map<std::string, std::map<long long, double>> series;
  for (std::size_t r = 0; r < ts.rows(); ++r) {
    const std::string& field = ts.cell(r, "field");
    const std::string& entity = ts.cell(r, "entity_id");
    long long hour = ts.integer(r, "hour");
    if (hour < 0)
      throw ValidationError(ts.row_context(r) + ": negative hour");
    std::string key;
    if (field == "baseline_demand") {
      if (!con_by_id.count(entity))
        throw ValidationError(ts.row_context(r) + ": unknown consumer '" +
                              entity + "'");
      key = "c:" + entity;
    } else if (field == "capacity_factor") {
      if (!gen_by_id.count(entity))
        throw ValidationError(ts.row_context(r) + ": unknown generator '" +
                              entity + "'");
      key = "g:" + entity;
    } else {
      throw ValidationError(ts.row_context(r) + ": unknown field '" + field + "'");
    }
    if (!series[key].emplace(hour, ts.number(r, "value")).second)
      throw ValidationError(ts.row_context(r) + ": duplicate sample for " +
                            entity + " hour " + std::to_string(hour));
  }
  int horizon = 0;
  for (const auto& [key, samples] : series)
    horizon = std::max(horizon, static_cast<int>(samples.rbegin()->first) + 1);
  if (horizon == 0) throw ValidationError("timeseries.csv: no samples");
  auto extract = [&](const std::string& key,
                     const std::string& owner) -> std::vector<double> {
    auto it = series.find(key);
    if (it == series.end())
      throw ValidationError("timeseries.csv: no series for " + owner);
    if (static_cast<int>(it->second.size()) != horizon)
      throw ValidationError("timeseries.csv: series for " + owner +
                            " does not cover all " + std::to_string(horizon) +
                            " hours");
    std::vector<double> out;
    out.reserve(horizon);
    long long expect = 0;
    for (const auto& [hour, value] : it->second) {
      if (hour != expect)
        throw ValidationError("timeseries.csv: series for " + owner +
                              " missing hour " + std::to_string(expect));
      out.push_back(value);
      ++expect;
    }
    return out;
  };
  auto fill_net = [&](Network& net) {
    for (auto& g : net.generators) {
      if (series.count("g:" + g.id))
        g.capacity_factor = extract("g:" + g.id, "generator " + g.id);
      else if (g.kind == GenKind::kThermal)
        g.capacity_factor.assign(horizon, 1.0);
      else
        throw ValidationError("timeseries.csv: renewable generator " + g.id +
                              " has no capacity factor series");
    }
    for (auto& c : net.consumers)
      c.baseline = extract("c:" + c.id, "consumer " + c.id);
  };
  fill_net(sys.transmission);
  for (auto& dn : sys.dns) fill_net(dn.net);
  sys.horizon = horizon;

  sys.slack_bus = sys.transmission.find_bus(get_key(cfg, "slack_bus"));
  if (sys.slack_bus < 0)
    throw ValidationError("config.txt: slack_bus not a transmission bus");
  for (auto& dn : sys.dns) {
    dn.host_bus = sys.transmission.find_bus(get_key(cfg, "dn_host." + dn.net.id));
    if (dn.host_bus < 0)
      throw ValidationError("config.txt: dn_host." + dn.net.id +
                            " not a transmission bus");
    dn.root = dn.net.find_bus(get_key(cfg, "dn_root." + dn.net.id));
    if (dn.root < 0)
      throw ValidationError("config.txt: dn_root." + dn.net.id +
                            " not a node of " + dn.net.id);
  }

  validate_system(sys);
  return sys;
}

void write_system(const PowerSystem& sys, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);

  std::string cfg;
  cfg += "base_mva=" + csv::format_double(sys.base_mva) + "\n";
  cfg += "lambda_lo=" + csv::format_double(sys.lambda_lo) + "\n";
  cfg += "lambda_hi=" + csv::format_double(sys.lambda_hi) + "\n";
  cfg += "slack_bus=" + sys.transmission.buses[sys.slack_bus].id + "\n";
  for (const auto& dn : sys.dns) {
    cfg += "dn_host." + dn.net.id + "=" +
           sys.transmission.buses[dn.host_bus].id + "\n";
    cfg += "dn_root." + dn.net.id + "=" + dn.net.buses[dn.root].id + "\n";
  }
  csv::write_text_file(dir / "config.txt", cfg);

  csv::Writer buses({"id", "system", "vmin2", "vmax2"});
  csv::Writer lines({"id", "system", "from", "to", "r", "x", "smax"});
  csv::Writer gens({"id", "system", "bus", "a", "b", "pmin", "pmax", "qmin",
                    "qmax", "sinv", "kind"});
  csv::Writer cons({"id", "system", "bus", "delta", "gamma"});
  csv::Writer ts({"hour", "entity_id", "field", "value"});

  auto dump_net = [&](const Network& net, const std::string& label) {
    for (const Bus& b : net.buses)
      buses.add_row({b.id, label, csv::format_double(b.vmin2),
                     csv::format_double(b.vmax2)});
    for (const Line& ln : net.lines)
      lines.add_row({ln.id, label, net.buses[ln.from].id, net.buses[ln.to].id,
                     csv::format_double(ln.r), csv::format_double(ln.x),
                     csv::format_double(ln.s_max)});
    for (const Generator& g : net.generators) {
      gens.add_row({g.id, label, net.buses[g.bus].id, csv::format_double(g.a),
                    csv::format_double(g.b), csv::format_double(g.p_min),
                    csv::format_double(g.p_max), csv::format_double(g.q_min),
                    csv::format_double(g.q_max),
                    g.inverter_mva ? csv::format_double(*g.inverter_mva) : "",
                    to_string(g.kind)});
      if (g.kind != GenKind::kThermal) {
        for (int t = 0; t < static_cast<int>(g.capacity_factor.size()); ++t)
          ts.add_row({csv::format_int(t), g.id, "capacity_factor",
                      csv::format_double(g.capacity_factor[t])});
      }
    }
    for (const Consumer& c : net.consumers) {
      cons.add_row({c.id, label, net.buses[c.bus].id,
                    csv::format_double(c.delta), csv::format_double(c.gamma)});
      for (int t = 0; t < static_cast<int>(c.baseline.size()); ++t)
        ts.add_row({csv::format_int(t), c.id, "baseline_demand",
                    csv::format_double(c.baseline[t])});
    }
  };
  dump_net(sys.transmission, kTransmission);
  for (const auto& dn : sys.dns) dump_net(dn.net, dn.net.id);

  buses.write_file(dir / "buses.csv");
  lines.write_file(dir / "lines.csv");
  gens.write_file(dir / "generators.csv");
  cons.write_file(dir / "consumers.csv");
  ts.write_file(dir / "timeseries.csv");
}

}  // namespace tdcoord::grid
