// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "grid/model.hpp"
#include "opf/builder.hpp"
#include "qp/problem.hpp"

namespace tdcoord::opf {

// Line or inverter ratings at or above this value are treated as absent
// (used by the relaxed-limits experiments).
inline constexpr double kNoLimit = 1e7;

struct DnOptions {
  double lambda_lo = 0.0;  // demand-curve price anchors
  double lambda_hi = 0.0;
  double base_mva = 100.0;
  int polygon_sides = 16;
  double root_v2 = 1.0;  // substation squared voltage reference
  qp::SolverOptions solver;
};

// Variable indices of one distribution block inside a larger program.
struct DnVariables {
  int p_import = -1;  // net intake at the substation, positive = import
  std::vector<int> p_gen, q_gen;
  std::vector<int> p_con, q_con;
  std::vector<int> p_flow, q_flow;
  std::vector<int> v_node;  // squared voltages
};

// Writes a full network-constrained DN block into the builder: LinDistFlow
// balances and voltage recursion, reactive coupling q = gamma*p, generator
// and demand bounds, polygonized inverter/line disks, and the block's cost
// and utility terms. The import variable is left uncoupled; the caller
// either prices it (standalone response) or wires it into a host-bus
// balance (market clearing). Row labels get `prefix` prepended.
DnVariables embed_distribution(QpBuilder& b, const grid::Distribution& dn,
                               int t, const DnOptions& opt,
                               const std::string& prefix);

struct DistributionProblem {
  qp::QuadraticProgram prob;
  DnVariables vars;
};

// Standalone optimal-response problem at a fixed substation price:
// minimize cost - utility + lambda_sub * import.
DistributionProblem build_distribution_opf(const grid::Distribution& dn, int t,
                                           double lambda_sub,
                                           const DnOptions& opt);

struct DistributionDispatch {
  double import_mw = 0.0;
  std::vector<double> p_gen, q_gen, p_con, q_con, p_flow, q_flow, v2;
  double utility_total = 0.0;  // flexible consumers only
  double cost_total = 0.0;
  double welfare_internal = 0.0;  // utility - cost
  double welfare_at_price = 0.0;  // utility - cost - lambda_sub*import
  double lambda_sub = 0.0;
  int iterations = 0;
};

// Reads a DN block's primal values out of a solution and recomputes the
// welfare pieces from the model data (not from the solver's objective).
DistributionDispatch extract_distribution_dispatch(const qp::QpSolution& sol,
                                                   const DnVariables& vars,
                                                   const grid::Distribution& dn,
                                                   int t, const DnOptions& opt,
                                                   double lambda_sub);

// Builds and solves; throws SolverError unless the status is optimal.
DistributionDispatch solve_distribution(const grid::Distribution& dn, int t,
                                        double lambda_sub, const DnOptions& opt);

// Independent feasibility audit of a dispatch against the physical model,
// using the true quadratic disks (not the polygonal cuts). Returns the
// worst constraint violation; all balances, bounds, voltage recursion and
// ratings are checked.
double distribution_violation(const grid::Distribution& dn, int t,
                              const DistributionDispatch& d,
                              const DnOptions& opt);

}  // namespace tdcoord::opf
