// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Sparse>
#include <limits>
#include <string>
#include <vector>

namespace tdcoord::qp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(SolveStatus s);

// minimize   0.5 x'Qx + c'x + c0
// subject to A_eq x = b_eq,  A_in x <= b_in,  lb <= x <= ub
//
// Q must be symmetric positive semidefinite. Row labels are carried through
// to the solution so callers can look up duals by name.
struct QuadraticProgram {
  int n = 0;
  Eigen::SparseMatrix<double> Q;
  Eigen::VectorXd c;
  double c0 = 0.0;

  Eigen::SparseMatrix<double> A_eq;
  Eigen::VectorXd b_eq;
  std::vector<std::string> eq_labels;

  Eigen::SparseMatrix<double> A_in;
  Eigen::VectorXd b_in;
  std::vector<std::string> in_labels;

  Eigen::VectorXd lb, ub;

  // Throws ValidationError on dimension mismatches, lb > ub, or an
  // asymmetric Q.
  void validate() const;
};

struct QpSolution {
  SolveStatus status = SolveStatus::kIterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;

  // Sign convention: the Lagrangian is f(x) + nu'(A_eq x - b_eq), so the
  // sensitivity of the optimal objective to b_eq is -nu.
  Eigen::VectorXd eq_duals;
  Eigen::VectorXd in_duals;          // >= 0
  Eigen::VectorXd lb_duals, ub_duals;  // >= 0

  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;

  double dual_for(const QuadraticProgram& prob, const std::string& eq_label) const;
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 100;
  // Reduced KKT systems up to this dimension use a dense LU factorization;
  // larger ones use a sparse LDLT. Both paths give the same answers to
  // solver tolerance; the split is purely about speed.
  int kkt_dense_max_dim = 200;
};

QpSolution solve(const QuadraticProgram& prob, const SolverOptions& opt = {});

// Recomputed from scratch, independent of solver internals. All values are
// relative (scaled by 1 + the norm of the relevant data).
struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;
};

KktResiduals kkt_residuals(const QuadraticProgram& prob, const QpSolution& sol);

}  // namespace tdcoord::qp
