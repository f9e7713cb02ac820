// SPDX-License-Identifier: Apache-2.0
#include "opf/distribution.hpp"

#include <cmath>

#include "core/error.hpp"
#include "demand/curve.hpp"
#include "qp/polygon.hpp"

namespace tdcoord::opf {

namespace {

demand::Curve consumer_curve(const grid::Consumer& c, int t,
                             const DnOptions& opt) {
  return demand::make_curve(c.baseline[t], c.delta, opt.lambda_lo,
                            opt.lambda_hi);
}

const grid::RadialLayout& layout_of(const grid::Distribution& dn,
                                    grid::RadialLayout& scratch) {
  if (dn.layout.parent.size() == dn.net.buses.size()) return dn.layout;
  scratch = grid::analyze_radial(dn.net, dn.root);
  return scratch;
}

}  // namespace

DnVariables embed_distribution(QpBuilder& b, const grid::Distribution& dn,
                               int t, const DnOptions& opt,
                               const std::string& prefix) {
  const grid::Network& net = dn.net;
  grid::RadialLayout scratch;
  const grid::RadialLayout& lay = layout_of(dn, scratch);
  const int nn = static_cast<int>(net.buses.size());

  DnVariables vars;
  vars.p_import = b.add_var(prefix + "pN", -qp::kInf, qp::kInf);

  for (const grid::Generator& g : net.generators) {
    int pg = b.add_var(prefix + "pG:" + g.id, g.p_min, g.p_cap(t));
    int qg = b.add_var(prefix + "qG:" + g.id, g.q_min, g.q_max);
    vars.p_gen.push_back(pg);
    vars.q_gen.push_back(qg);
    if (g.a != 0.0) b.add_quad_cost(pg, g.a);
    if (g.b != 0.0) b.add_lin_cost(pg, g.b);
  }
  for (const grid::Consumer& c : net.consumers) {
    demand::Curve curve = consumer_curve(c, t, opt);
    int pd = b.add_var(prefix + "pD:" + c.id, curve.p_min, curve.p_max);
    int qd = b.add_var(prefix + "qD:" + c.id, -qp::kInf, qp::kInf);
    vars.p_con.push_back(pd);
    vars.q_con.push_back(qd);
    if (curve.flexible()) {
      // Minimization form of -utility, constant term included so the
      // program's optimum equals the welfare exactly.
      b.add_quad_cost(pd, 1.0 / curve.beta);
      b.add_lin_cost(pd, -curve.alpha / curve.beta);
      b.add_cost_offset(curve.alpha / curve.beta * curve.p_min -
                        curve.p_min * curve.p_min / (2.0 * curve.beta));
    }
    b.add_eq(prefix + "pf:" + c.id, {{qd, 1.0}, {pd, -c.gamma}}, 0.0);
  }
  for (const grid::Line& ln : net.lines) {
    int pf = b.add_var(prefix + "pF:" + ln.id, -qp::kInf, qp::kInf);
    int qf = b.add_var(prefix + "qF:" + ln.id, -qp::kInf, qp::kInf);
    vars.p_flow.push_back(pf);
    vars.q_flow.push_back(qf);
    if (ln.s_max < kNoLimit) {
      auto planes = qp::polygonize_disk(ln.s_max, opt.polygon_sides);
      for (std::size_t k = 0; k < planes.size(); ++k)
        b.add_in(prefix + "cap:" + ln.id + ":" + std::to_string(k),
                 {{pf, planes[k].cp}, {qf, planes[k].cq}}, planes[k].rhs);
    }
  }
  for (int n = 0; n < nn; ++n) {
    const grid::Bus& bus = net.buses[n];
    double lo = bus.vmin2, hi = bus.vmax2;
    if (n == dn.root) lo = hi = opt.root_v2;
    vars.v_node.push_back(b.add_var(prefix + "v:" + bus.id, lo, hi));
  }
  for (std::size_t i = 0; i < net.generators.size(); ++i) {
    const grid::Generator& g = net.generators[i];
    if (!g.inverter_mva || *g.inverter_mva >= kNoLimit) continue;
    auto planes = qp::polygonize_disk(*g.inverter_mva, opt.polygon_sides);
    for (std::size_t k = 0; k < planes.size(); ++k)
      b.add_in(prefix + "inv:" + g.id + ":" + std::to_string(k),
               {{vars.p_gen[i], planes[k].cp}, {vars.q_gen[i], planes[k].cq}},
               planes[k].rhs);
  }

  // Nodal active balances (root receives the import) and reactive balances
  // (none at the root: the substation exchanges reactive power freely).
  for (int n = 0; n < nn; ++n) {
    QpBuilder::Terms p_terms, q_terms;
    if (n == dn.root) p_terms.push_back({vars.p_import, 1.0});
    for (std::size_t i = 0; i < net.generators.size(); ++i)
      if (net.generators[i].bus == n) {
        p_terms.push_back({vars.p_gen[i], 1.0});
        q_terms.push_back({vars.q_gen[i], 1.0});
      }
    for (std::size_t j = 0; j < net.consumers.size(); ++j)
      if (net.consumers[j].bus == n) {
        p_terms.push_back({vars.p_con[j], -1.0});
        q_terms.push_back({vars.q_con[j], -1.0});
      }
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
      if (net.lines[l].from == n) {
        p_terms.push_back({vars.p_flow[l], -1.0});
        q_terms.push_back({vars.q_flow[l], -1.0});
      }
      if (net.lines[l].to == n) {
        p_terms.push_back({vars.p_flow[l], 1.0});
        q_terms.push_back({vars.q_flow[l], 1.0});
      }
    }
    b.add_eq(prefix + "p_bal:" + net.buses[n].id, p_terms, 0.0);
    if (n != dn.root)
      b.add_eq(prefix + "q_bal:" + net.buses[n].id, q_terms, 0.0);
  }

  // LinDistFlow voltage recursion along each tree edge.
  for (int n = 0; n < nn; ++n) {
    if (n == dn.root) continue;
    int a = lay.parent[n];
    int l = lay.parent_line[n];
    double sgn = static_cast<double>(lay.line_sign[n]);
    const grid::Line& ln = net.lines[l];
    b.add_eq(prefix + "volt:" + net.buses[n].id,
             {{vars.v_node[n], 1.0},
              {vars.v_node[a], -1.0},
              {vars.p_flow[l], sgn * 2.0 * ln.r / opt.base_mva},
              {vars.q_flow[l], sgn * 2.0 * ln.x / opt.base_mva}},
             0.0);
  }
  return vars;
}

DistributionProblem build_distribution_opf(const grid::Distribution& dn, int t,
                                           double lambda_sub,
                                           const DnOptions& opt) {
  QpBuilder b;
  DistributionProblem out;
  out.vars = embed_distribution(b, dn, t, opt, "");
  b.add_lin_cost(out.vars.p_import, lambda_sub);
  out.prob = b.build();
  return out;
}

DistributionDispatch extract_distribution_dispatch(const qp::QpSolution& sol,
                                                   const DnVariables& vars,
                                                   const grid::Distribution& dn,
                                                   int t, const DnOptions& opt,
                                                   double lambda_sub) {
  DistributionDispatch d;
  d.lambda_sub = lambda_sub;
  d.import_mw = sol.x[vars.p_import];
  auto grab = [&sol](const std::vector<int>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(sol.x[i]);
    return out;
  };
  d.p_gen = grab(vars.p_gen);
  d.q_gen = grab(vars.q_gen);
  d.p_con = grab(vars.p_con);
  d.q_con = grab(vars.q_con);
  d.p_flow = grab(vars.p_flow);
  d.q_flow = grab(vars.q_flow);
  d.v2 = grab(vars.v_node);
  for (std::size_t i = 0; i < dn.net.generators.size(); ++i) {
    const grid::Generator& g = dn.net.generators[i];
    d.cost_total += 0.5 * g.a * d.p_gen[i] * d.p_gen[i] + g.b * d.p_gen[i];
  }
  for (std::size_t j = 0; j < dn.net.consumers.size(); ++j) {
    demand::Curve curve = consumer_curve(dn.net.consumers[j], t, opt);
    if (curve.flexible()) d.utility_total += demand::utility(curve, d.p_con[j]);
  }
  d.welfare_internal = d.utility_total - d.cost_total;
  d.welfare_at_price = d.welfare_internal - lambda_sub * d.import_mw;
  d.iterations = sol.iterations;
  return d;
}

DistributionDispatch solve_distribution(const grid::Distribution& dn, int t,
                                        double lambda_sub,
                                        const DnOptions& opt) {
  DistributionProblem p = build_distribution_opf(dn, t, lambda_sub, opt);
  qp::QpSolution sol = qp::solve(p.prob, opt.solver);
  if (sol.status != qp::SolveStatus::kOptimal)
    throw SolverError("distribution " + dn.net.id + " hour " +
                      std::to_string(t) + ": solver status " +
                      qp::to_string(sol.status));
  return extract_distribution_dispatch(sol, p.vars, dn, t, opt, lambda_sub);
}

double distribution_violation(const grid::Distribution& dn, int t,
                              const DistributionDispatch& d,
                              const DnOptions& opt) {
  const grid::Network& net = dn.net;
  grid::RadialLayout scratch;
  const grid::RadialLayout& lay = layout_of(dn, scratch);
  const int nn = static_cast<int>(net.buses.size());
  double worst = 0.0;
  auto track = [&worst](double v) { worst = std::max(worst, v); };

  for (int n = 0; n < nn; ++n) {
    double p = n == dn.root ? d.import_mw : 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < net.generators.size(); ++i)
      if (net.generators[i].bus == n) {
        p += d.p_gen[i];
        q += d.q_gen[i];
      }
    for (std::size_t j = 0; j < net.consumers.size(); ++j)
      if (net.consumers[j].bus == n) {
        p -= d.p_con[j];
        q -= d.q_con[j];
      }
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
      if (net.lines[l].from == n) {
        p -= d.p_flow[l];
        q -= d.q_flow[l];
      }
      if (net.lines[l].to == n) {
        p += d.p_flow[l];
        q += d.q_flow[l];
      }
    }
    track(std::abs(p));
    if (n != dn.root) track(std::abs(q));
  }
  for (int n = 0; n < nn; ++n) {
    if (n == dn.root) {
      track(std::abs(d.v2[n] - opt.root_v2));
      continue;
    }
    int a = lay.parent[n];
    const grid::Line& ln = net.lines[lay.parent_line[n]];
    double sgn = static_cast<double>(lay.line_sign[n]);
    track(std::abs(d.v2[n] - d.v2[a] +
                   sgn * 2.0 *
                       (ln.r * d.p_flow[lay.parent_line[n]] +
                        ln.x * d.q_flow[lay.parent_line[n]]) /
                       opt.base_mva));
    track(net.buses[n].vmin2 - d.v2[n]);
    track(d.v2[n] - net.buses[n].vmax2);
  }
  for (std::size_t i = 0; i < net.generators.size(); ++i) {
    const grid::Generator& g = net.generators[i];
    track(g.p_min - d.p_gen[i]);
    track(d.p_gen[i] - g.p_cap(t));
    track(g.q_min - d.q_gen[i]);
    track(d.q_gen[i] - g.q_max);
    if (g.inverter_mva && *g.inverter_mva < kNoLimit)
      track(std::hypot(d.p_gen[i], d.q_gen[i]) - *g.inverter_mva);
  }
  for (std::size_t j = 0; j < net.consumers.size(); ++j) {
    const grid::Consumer& c = net.consumers[j];
    demand::Curve curve = consumer_curve(c, t, opt);
    track(curve.p_min - d.p_con[j]);
    track(d.p_con[j] - curve.p_max);
    track(std::abs(d.q_con[j] - c.gamma * d.p_con[j]));
  }
  for (std::size_t l = 0; l < net.lines.size(); ++l)
    if (net.lines[l].s_max < kNoLimit)
      track(std::hypot(d.p_flow[l], d.q_flow[l]) - net.lines[l].s_max);
  return worst;
}

}  // namespace tdcoord::opf
