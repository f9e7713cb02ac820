// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "grid/model.hpp"
#include "learn/bid_curve.hpp"
#include "opf/builder.hpp"
#include "opf/distribution.hpp"
#include "qp/problem.hpp"

namespace tdcoord::opf {

// How one distribution network appears inside the transmission clearing.
enum class DnModelKind {
  kEmbedded,    // complete network block (benchmark)
  kAggregated,  // its generators/consumers at the host bus, active power only
  kFixed,       // intake pinned to a forecast
  kBid,         // price-responsive block bid
};

struct DnModel {
  DnModelKind kind = DnModelKind::kEmbedded;
  double fixed_import = 0.0;  // kFixed
  learn::BidCurve bid;        // kBid
};

struct ClearingOptions {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double base_mva = 100.0;
  int polygon_sides = 16;
  double root_v2 = 1.0;
  qp::SolverOptions solver;
  // When positive, every bus gets a pair of non-negative slack injections
  // at this price per MW (used by redispatch; zero disables them).
  double slack_penalty = 0.0;

  DnOptions dn_options() const {
    return {lambda_lo, lambda_hi, base_mva, polygon_sides, root_v2, solver};
  }
};

struct TxVariables {
  std::vector<int> theta, p_gen, p_con, p_flow;
  std::vector<int> dn_import;             // one per DN regardless of kind
  std::vector<DnVariables> dn_blocks;     // filled for embedded DNs
  std::vector<int> slack_pos, slack_neg;  // per bus, when slack is enabled
};

struct TransmissionProblem {
  qp::QuadraticProgram prob;
  TxVariables vars;
};

// Assembles the market-clearing program for one hour given each DN's
// representation. Bus balances are labeled "p_bal:<bus>" for dual lookup.
// Throws ValidationError on a malformed bid curve or model-count mismatch.
TransmissionProblem build_transmission_clearing(
    const grid::PowerSystem& sys, int t, const std::vector<DnModel>& dn_models,
    const ClearingOptions& opt);

struct TransmissionDispatch {
  std::vector<double> p_gen, p_con, p_flow, theta;
  std::vector<double> lmp;        // per bus: marginal cost of serving load
  std::vector<double> dn_import;  // cleared/assumed intake per DN
  std::vector<double> dn_price;   // host-bus LMP per DN
  std::vector<DistributionDispatch> dn_embedded;  // only for embedded DNs
  double objective = 0.0;  // minimization value
  double welfare = 0.0;    // -objective: the program's own welfare measure
  double slack_mw = 0.0;   // total |slack|
  std::vector<double> slack_bus;
  int iterations = 0;
};

// Builds, solves, extracts. Throws SolverError unless optimal.
TransmissionDispatch solve_transmission(const grid::PowerSystem& sys, int t,
                                        const std::vector<DnModel>& dn_models,
                                        const ClearingOptions& opt);

// Post-market redispatch: DN intakes fixed at their actual values, per-bus
// elastic slack keeps the problem feasible. The slack penalty used is
// max(opt.slack_penalty, 10*lambda_hi).
TransmissionDispatch solve_redispatch(const grid::PowerSystem& sys, int t,
                                      const std::vector<double>& intakes,
                                      const ClearingOptions& opt);

// Independent audit of transmission-side feasibility: bus balances, flow
// equations, generator/demand/line bounds. Embedded DN blocks are checked
// with distribution_violation. Returns the worst violation.
double transmission_violation(const grid::PowerSystem& sys, int t,
                              const std::vector<DnModel>& dn_models,
                              const TransmissionDispatch& d,
                              const ClearingOptions& opt);

}  // namespace tdcoord::opf
