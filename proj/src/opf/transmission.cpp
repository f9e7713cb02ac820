// SPDX-License-Identifier: Apache-2.0
#include "opf/transmission.hpp"

#include <cmath>

#include "core/error.hpp"
#include "demand/curve.hpp"

namespace tdcoord::opf {

namespace {

demand::Curve consumer_curve(const grid::Consumer& c, int t,
                             const ClearingOptions& opt) {
  return demand::make_curve(c.baseline[t], c.delta, opt.lambda_lo,
                            opt.lambda_hi);
}

void add_consumer_objective(QpBuilder& b, int pd, const demand::Curve& curve) {
  if (!curve.flexible()) return;
  b.add_quad_cost(pd, 1.0 / curve.beta);
  b.add_lin_cost(pd, -curve.alpha / curve.beta);
  b.add_cost_offset(curve.alpha / curve.beta * curve.p_min -
                    curve.p_min * curve.p_min / (2.0 * curve.beta));
}

}  // namespace

TransmissionProblem build_transmission_clearing(
    const grid::PowerSystem& sys, int t, const std::vector<DnModel>& dn_models,
    const ClearingOptions& opt) {
  if (dn_models.size() != sys.dns.size())
    throw ValidationError("clearing: need one DnModel per distribution network");
  const grid::Network& net = sys.transmission;
  const int nb = static_cast<int>(net.buses.size());
  QpBuilder b;
  TransmissionProblem out;
  TxVariables& vars = out.vars;

  for (int n = 0; n < nb; ++n) {
    double lo = -qp::kInf, hi = qp::kInf;
    if (n == sys.slack_bus) lo = hi = 0.0;
    vars.theta.push_back(b.add_var("theta:" + net.buses[n].id, lo, hi));
  }
  for (const grid::Generator& g : net.generators) {
    int pg = b.add_var("pG:" + g.id, g.p_min, g.p_cap(t));
    vars.p_gen.push_back(pg);
    if (g.a != 0.0) b.add_quad_cost(pg, g.a);
    if (g.b != 0.0) b.add_lin_cost(pg, g.b);
  }
  for (const grid::Consumer& c : net.consumers) {
    demand::Curve curve = consumer_curve(c, t, opt);
    int pd = b.add_var("pD:" + c.id, curve.p_min, curve.p_max);
    vars.p_con.push_back(pd);
    add_consumer_objective(b, pd, curve);
  }
  for (const grid::Line& ln : net.lines) {
    double cap = ln.s_max < kNoLimit ? ln.s_max : qp::kInf;
    int pf = b.add_var("pF:" + ln.id, -cap, cap);
    vars.p_flow.push_back(pf);
  }

  vars.dn_blocks.resize(sys.dns.size());
  const DnOptions dn_opt = opt.dn_options();
  for (std::size_t k = 0; k < sys.dns.size(); ++k) {
    const grid::Distribution& dn = sys.dns[k];
    const DnModel& model = dn_models[k];
    const std::string tag = dn.net.id;
    switch (model.kind) {
      case DnModelKind::kEmbedded: {
        DnVariables dv = embed_distribution(b, dn, t, dn_opt, "dn:" + tag + ":");
        vars.dn_import.push_back(dv.p_import);
        vars.dn_blocks[k] = std::move(dv);
        break;
      }
      case DnModelKind::kAggregated: {
        // Active-power copy of the DN's resources at the host bus: limits
        // and costs are kept, the network itself is dropped.
        int pn = b.add_var("aggN:" + tag, -qp::kInf, qp::kInf);
        QpBuilder::Terms tie{{pn, 1.0}};
        for (const grid::Generator& g : dn.net.generators) {
          int pg = b.add_var("agg:" + tag + ":pG:" + g.id, g.p_min, g.p_cap(t));
          if (g.a != 0.0) b.add_quad_cost(pg, g.a);
          if (g.b != 0.0) b.add_lin_cost(pg, g.b);
          tie.push_back({pg, 1.0});
        }
        for (const grid::Consumer& c : dn.net.consumers) {
          demand::Curve curve = consumer_curve(c, t, opt);
          int pd = b.add_var("agg:" + tag + ":pD:" + c.id, curve.p_min,
                             curve.p_max);
          add_consumer_objective(b, pd, curve);
          tie.push_back({pd, -1.0});
        }
        // Intake is whatever the aggregated resources do not cover.
        b.add_eq("agg_import:" + tag, tie, 0.0);
        vars.dn_import.push_back(pn);
        break;
      }
      case DnModelKind::kFixed: {
        int pn = b.add_var("fixN:" + tag, model.fixed_import, model.fixed_import);
        vars.dn_import.push_back(pn);
        break;
      }
      case DnModelKind::kBid: {
        model.bid.validate();
        int pn = b.add_var("bidN:" + tag, -qp::kInf, qp::kInf);
        QpBuilder::Terms tie{{pn, 1.0}};
        double prev = model.bid.base_quantity;
        for (std::size_t i = 0; i < model.bid.blocks.size(); ++i) {
          const auto& blk = model.bid.blocks[i];
          int pb = b.add_var("bid:" + tag + ":" + std::to_string(i + 1), 0.0,
                             blk.quantity - prev);
          b.add_lin_cost(pb, -blk.price);  // block utility, minimization form
          tie.push_back({pb, -1.0});
          prev = blk.quantity;
        }
        b.add_eq("bid:" + tag, tie, model.bid.base_quantity);
        vars.dn_import.push_back(pn);
        break;
      }
    }
  }

  if (opt.slack_penalty > 0.0) {
    for (int n = 0; n < nb; ++n) {
      int sp = b.add_var("slack+:" + net.buses[n].id, 0.0, qp::kInf);
      int sn = b.add_var("slack-:" + net.buses[n].id, 0.0, qp::kInf);
      b.add_lin_cost(sp, opt.slack_penalty);
      b.add_lin_cost(sn, opt.slack_penalty);
      vars.slack_pos.push_back(sp);
      vars.slack_neg.push_back(sn);
    }
  }

  for (std::size_t l = 0; l < net.lines.size(); ++l) {
    const grid::Line& ln = net.lines[l];
    b.add_eq("flow:" + ln.id,
             {{vars.p_flow[l], 1.0},
              {vars.theta[ln.from], -opt.base_mva / ln.x},
              {vars.theta[ln.to], opt.base_mva / ln.x}},
             0.0);
  }
  for (int n = 0; n < nb; ++n) {
    QpBuilder::Terms terms;
    for (std::size_t i = 0; i < net.generators.size(); ++i)
      if (net.generators[i].bus == n) terms.push_back({vars.p_gen[i], 1.0});
    for (std::size_t j = 0; j < net.consumers.size(); ++j)
      if (net.consumers[j].bus == n) terms.push_back({vars.p_con[j], -1.0});
    for (std::size_t k = 0; k < sys.dns.size(); ++k)
      if (sys.dns[k].host_bus == n) terms.push_back({vars.dn_import[k], -1.0});
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
      if (net.lines[l].from == n) terms.push_back({vars.p_flow[l], -1.0});
      if (net.lines[l].to == n) terms.push_back({vars.p_flow[l], 1.0});
    }
    if (!vars.slack_pos.empty()) {
      terms.push_back({vars.slack_pos[n], 1.0});
      terms.push_back({vars.slack_neg[n], -1.0});
    }
    b.add_eq("p_bal:" + net.buses[n].id, terms, 0.0);
  }

  out.prob = b.build();
  return out;
}

TransmissionDispatch solve_transmission(const grid::PowerSystem& sys, int t,
                                        const std::vector<DnModel>& dn_models,
                                        const ClearingOptions& opt) {
  TransmissionProblem p = build_transmission_clearing(sys, t, dn_models, opt);
  qp::QpSolution sol = qp::solve(p.prob, opt.solver);
  if (sol.status != qp::SolveStatus::kOptimal)
    throw SolverError("transmission clearing hour " + std::to_string(t) +
                      ": solver status " + qp::to_string(sol.status));

  TransmissionDispatch d;
  auto grab = [&sol](const std::vector<int>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(sol.x[i]);
    return out;
  };
  d.p_gen = grab(p.vars.p_gen);
  d.p_con = grab(p.vars.p_con);
  d.p_flow = grab(p.vars.p_flow);
  d.theta = grab(p.vars.theta);
  d.dn_import = grab(p.vars.dn_import);
  const grid::Network& net = sys.transmission;
  for (const grid::Bus& bus : net.buses)
    d.lmp.push_back(-sol.dual_for(p.prob, "p_bal:" + bus.id));
  for (const auto& dn : sys.dns) d.dn_price.push_back(d.lmp[dn.host_bus]);
  const DnOptions dn_opt = opt.dn_options();
  for (std::size_t k = 0; k < sys.dns.size(); ++k) {
    if (dn_models[k].kind != DnModelKind::kEmbedded) continue;
    d.dn_embedded.resize(sys.dns.size());
    d.dn_embedded[k] = extract_distribution_dispatch(
        sol, p.vars.dn_blocks[k], sys.dns[k], t, dn_opt, d.dn_price[k]);
  }
  if (!p.vars.slack_pos.empty()) {
    for (std::size_t n = 0; n < net.buses.size(); ++n) {
      double sp = sol.x[p.vars.slack_pos[n]];
      double sn = sol.x[p.vars.slack_neg[n]];
      d.slack_bus.push_back(sp - sn);
      d.slack_mw += sp + sn;
    }
  }
  d.objective = sol.objective;
  d.welfare = -sol.objective;
  d.iterations = sol.iterations;
  return d;
}

TransmissionDispatch solve_redispatch(const grid::PowerSystem& sys, int t,
                                      const std::vector<double>& intakes,
                                      const ClearingOptions& opt) {
  if (intakes.size() != sys.dns.size())
    throw ValidationError("redispatch: need one intake per distribution network");
  ClearingOptions ropt = opt;
  ropt.slack_penalty = std::max(opt.slack_penalty, 10.0 * opt.lambda_hi);
  std::vector<DnModel> models(sys.dns.size());
  for (std::size_t k = 0; k < intakes.size(); ++k) {
    models[k].kind = DnModelKind::kFixed;
    models[k].fixed_import = intakes[k];
  }
  return solve_transmission(sys, t, models, ropt);
}

double transmission_violation(const grid::PowerSystem& sys, int t,
                              const std::vector<DnModel>& dn_models,
                              const TransmissionDispatch& d,
                              const ClearingOptions& opt) {
  const grid::Network& net = sys.transmission;
  double worst = 0.0;
  auto track = [&worst](double v) { worst = std::max(worst, v); };

  for (std::size_t n = 0; n < net.buses.size(); ++n) {
    double p = d.slack_bus.empty() ? 0.0 : d.slack_bus[n];
    for (std::size_t i = 0; i < net.generators.size(); ++i)
      if (net.generators[i].bus == static_cast<int>(n)) p += d.p_gen[i];
    for (std::size_t j = 0; j < net.consumers.size(); ++j)
      if (net.consumers[j].bus == static_cast<int>(n)) p -= d.p_con[j];
    for (std::size_t k = 0; k < sys.dns.size(); ++k)
      if (sys.dns[k].host_bus == static_cast<int>(n)) p -= d.dn_import[k];
    for (std::size_t l = 0; l < net.lines.size(); ++l) {
      if (net.lines[l].from == static_cast<int>(n)) p -= d.p_flow[l];
      if (net.lines[l].to == static_cast<int>(n)) p += d.p_flow[l];
    }
    track(std::abs(p));
  }
  for (std::size_t l = 0; l < net.lines.size(); ++l) {
    const grid::Line& ln = net.lines[l];
    track(std::abs(d.p_flow[l] - opt.base_mva / ln.x *
                                     (d.theta[ln.from] - d.theta[ln.to])));
    if (ln.s_max < kNoLimit) track(std::abs(d.p_flow[l]) - ln.s_max);
  }
  track(std::abs(d.theta[sys.slack_bus]));
  for (std::size_t i = 0; i < net.generators.size(); ++i) {
    const grid::Generator& g = net.generators[i];
    track(g.p_min - d.p_gen[i]);
    track(d.p_gen[i] - g.p_cap(t));
  }
  for (std::size_t j = 0; j < net.consumers.size(); ++j) {
    demand::Curve curve = consumer_curve(net.consumers[j], t, opt);
    track(curve.p_min - d.p_con[j]);
    track(d.p_con[j] - curve.p_max);
  }
  const DnOptions dn_opt = opt.dn_options();
  for (std::size_t k = 0; k < sys.dns.size(); ++k) {
    if (dn_models[k].kind != DnModelKind::kEmbedded || d.dn_embedded.empty())
      continue;
    track(distribution_violation(sys.dns[k], t, d.dn_embedded[k], dn_opt));
    track(std::abs(d.dn_embedded[k].import_mw - d.dn_import[k]));
  }
  return worst;
}

}  // namespace tdcoord::opf
