// SPDX-License-Identifier: Apache-2.0
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "core/error.hpp"
#include "qp/problem.hpp"

namespace tdcoord::qp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double inf_norm(const VectorXd& v) {
  return v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
}

double finite_inf_norm(const VectorXd& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::isfinite(v[i])) m = std::max(m, std::abs(v[i]));
  return m;
}

// Combined standard form: A x = b (original equalities plus fixed
// variables), G x <= h (original inequalities plus finite bounds).
struct Standardized {
  SpMat A;
  VectorXd b;
  int orig_eq_rows = 0;
  std::vector<int> fixed_vars;  // appended row k pins var fixed_vars[k]

  SpMat G;
  VectorXd h;
  std::vector<int> in_row_map;  // G row -> original A_in row
  std::vector<int> ub_vars, lb_vars;
  bool bound_conflict = false;  // lb > ub or a non-finite fixed value
};

Standardized standardize(const QuadraticProgram& p) {
  Standardized s;
  const int n = p.n;

  std::vector<int> fixed;
  for (int i = 0; i < n; ++i) {
    if (p.lb[i] > p.ub[i]) {
      s.bound_conflict = true;
      return s;
    }
    if (p.lb[i] == p.ub[i]) {
      if (!std::isfinite(p.lb[i])) {
        s.bound_conflict = true;
        return s;
      }
      fixed.push_back(i);
    }
  }

  s.orig_eq_rows = static_cast<int>(p.A_eq.rows());
  s.fixed_vars = fixed;
  const int me = s.orig_eq_rows + static_cast<int>(fixed.size());
  std::vector<Triplet> at;
  for (int k = 0; k < p.A_eq.outerSize(); ++k)
    for (SpMat::InnerIterator it(p.A_eq, k); it; ++it)
      at.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                      it.value());
  s.b.resize(me);
  s.b.head(s.orig_eq_rows) = p.b_eq;
  for (std::size_t k = 0; k < fixed.size(); ++k) {
    at.emplace_back(s.orig_eq_rows + static_cast<int>(k), fixed[k], 1.0);
    s.b[s.orig_eq_rows + static_cast<int>(k)] = p.lb[fixed[k]];
  }
  s.A.resize(me, n);
  s.A.setFromTriplets(at.begin(), at.end());

  std::vector<Triplet> gt;
  std::vector<double> h;
  int row = 0;
  std::vector<int> row_of(static_cast<std::size_t>(p.A_in.rows()), -1);
  for (int r = 0; r < p.A_in.rows(); ++r) {
    if (p.b_in[r] == kInf) continue;  // trivially satisfied
    row_of[r] = row;
    s.in_row_map.push_back(r);
    h.push_back(p.b_in[r]);
    ++row;
  }
  for (int k = 0; k < p.A_in.outerSize(); ++k)
    for (SpMat::InnerIterator it(p.A_in, k); it; ++it) {
      int nr = row_of[it.row()];
      if (nr >= 0) gt.emplace_back(nr, static_cast<int>(it.col()), it.value());
    }
  std::vector<bool> is_fixed(n, false);
  for (int i : fixed) is_fixed[i] = true;
  for (int i = 0; i < n; ++i) {
    if (is_fixed[i]) continue;
    if (std::isfinite(p.ub[i])) {
      gt.emplace_back(row, i, 1.0);
      h.push_back(p.ub[i]);
      s.ub_vars.push_back(i);
      ++row;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (is_fixed[i]) continue;
    if (std::isfinite(p.lb[i])) {
      gt.emplace_back(row, i, -1.0);
      h.push_back(-p.lb[i]);
      s.lb_vars.push_back(i);
      ++row;
    }
  }
  s.G.resize(row, n);
  s.G.setFromTriplets(gt.begin(), gt.end());
  s.h = Eigen::Map<VectorXd>(h.data(), static_cast<Eigen::Index>(h.size()));
  return s;
}

// Factorization of the reduced KKT matrix
//   [ Q + G'WG + dx*I   A' ]
//   [ A                -dc*I ]
// with a dense LU path for small systems and a sparse LDLT path (the
// regularized matrix is quasi-definite, so no pivoting is needed) for
// large ones. Solves are refined against the unregularized operator; when
// refinement cannot reach a small residual the regularization is escalated
// and the matrix refactored, trading a little bias (which the refinement
// then removes) for pivots the factorization can survive.
class KktSolver {
 public:
  KktSolver(const SpMat& Q, const SpMat& A, const SpMat& G, bool dense,
            double base_reg)
      : Q_(Q), A_(A), G_(G), n_(static_cast<int>(Q.rows())),
        me_(static_cast<int>(A.rows())), dense_(dense), base_reg_(base_reg) {}

  void factor(const VectorXd& w) {
    w_ = w;
    reg_ = base_reg_;
    refactor();
  }

  // Solves the unregularized system through the regularized factorization
  // with iterative refinement, escalating the regularization if the
  // refined residual stays large.
  void solve(const VectorXd& rhs_x, const VectorXd& rhs_e, VectorXd* dx,
             VectorXd* dnu) {
    VectorXd rhs(n_ + me_);
    rhs.head(n_) = rhs_x;
    rhs.tail(me_) = rhs_e;
    const double scale = 1.0 + inf_norm(rhs);
    VectorXd sol;
    for (int attempt = 0;; ++attempt) {
      sol = backsolve(rhs);
      for (int pass = 0; pass < 3; ++pass) {
        VectorXd res = rhs - apply_exact(sol);
        if (inf_norm(res) <= 1e-10 * scale) break;
        sol += backsolve(res);
      }
      double rel = inf_norm(VectorXd(rhs - apply_exact(sol))) / scale;
      if (rel <= 1e-8 || attempt >= 3 || !std::isfinite(rel)) {
        if (!sol.allFinite()) sol.setZero();
        break;
      }
      reg_ *= 1e3;
      refactor();
    }
    *dx = sol.head(n_);
    *dnu = sol.tail(me_);
  }

 private:
  void refactor() {
    SpMat gtwg = G_.transpose() * w_.asDiagonal() * G_;
    if (dense_) {
      MatrixXd K = MatrixXd::Zero(n_ + me_, n_ + me_);
      scatter(K, Q_, 0, 0);
      scatter(K, gtwg, 0, 0);
      for (int i = 0; i < n_; ++i) K(i, i) += reg_;
      for (int k = 0; k < A_.outerSize(); ++k)
        for (SpMat::InnerIterator it(A_, k); it; ++it) {
          K(n_ + it.row(), it.col()) += it.value();
          K(it.col(), n_ + it.row()) += it.value();
        }
      for (int i = 0; i < me_; ++i) K(n_ + i, n_ + i) = -reg_;
      lu_.compute(K);
    } else {
      std::vector<Triplet> tt;
      append(tt, Q_, 0, 0);
      append(tt, gtwg, 0, 0);
      for (int i = 0; i < n_; ++i) tt.emplace_back(i, i, reg_);
      for (int k = 0; k < A_.outerSize(); ++k)
        for (SpMat::InnerIterator it(A_, k); it; ++it) {
          tt.emplace_back(n_ + static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());
          tt.emplace_back(static_cast<int>(it.col()),
                          n_ + static_cast<int>(it.row()), it.value());
        }
      for (int i = 0; i < me_; ++i) tt.emplace_back(n_ + i, n_ + i, -reg_);
      SpMat K(n_ + me_, n_ + me_);
      K.setFromTriplets(tt.begin(), tt.end());
      if (!analyzed_) {
        ldlt_.analyzePattern(K);
        analyzed_ = true;
      }
      ldlt_.factorize(K);
    }
  }

  VectorXd backsolve(const VectorXd& rhs) const {
    return dense_ ? VectorXd(lu_.solve(rhs)) : VectorXd(ldlt_.solve(rhs));
  }

  VectorXd apply_exact(const VectorXd& v) const {
    VectorXd x = v.head(n_), nu = v.tail(me_);
    VectorXd out(n_ + me_);
    out.head(n_) = Q_ * x + G_.transpose() * (w_.cwiseProduct(G_ * x)) +
                   A_.transpose() * nu;
    out.tail(me_) = A_ * x;
    return out;
  }

  static void scatter(MatrixXd& K, const SpMat& M, int r0, int c0) {
    for (int k = 0; k < M.outerSize(); ++k)
      for (SpMat::InnerIterator it(M, k); it; ++it)
        K(r0 + it.row(), c0 + it.col()) += it.value();
  }

  static void append(std::vector<Triplet>& tt, const SpMat& M, int r0, int c0) {
    for (int k = 0; k < M.outerSize(); ++k)
      for (SpMat::InnerIterator it(M, k); it; ++it)
        tt.emplace_back(r0 + static_cast<int>(it.row()),
                        c0 + static_cast<int>(it.col()), it.value());
  }

  const SpMat& Q_;
  const SpMat& A_;
  const SpMat& G_;
  VectorXd w_;
  int n_, me_;
  bool dense_;
  double base_reg_ = 0.0, reg_ = 0.0;
  Eigen::PartialPivLU<MatrixXd> lu_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
  bool analyzed_ = false;
};

double max_step(const VectorXd& v, const VectorXd& dv) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  return a;
}

struct Residuals {
  double rel_dual = 0.0, rel_primal = 0.0, rel_gap = 0.0;
  double worst() const { return std::max({rel_dual, rel_primal, rel_gap}); }
};

// Scatters combined-system duals back to the caller's layout and finalizes
// the reported residuals from first principles.
QpSolution finish(const QuadraticProgram& prob, const Standardized& st,
                  SolveStatus status, const VectorXd& x, const VectorXd& nu,
                  const VectorXd& z, int iters) {
  QpSolution sol;
  sol.status = status;
  sol.iterations = iters;
  sol.x = x;
  sol.objective = 0.5 * x.dot(VectorXd(prob.Q * x)) + prob.c.dot(x) + prob.c0;
  sol.eq_duals = nu.size() > 0 ? VectorXd(nu.head(st.orig_eq_rows))
                               : VectorXd::Zero(st.orig_eq_rows);
  sol.in_duals = VectorXd::Zero(prob.A_in.rows());
  sol.lb_duals = VectorXd::Zero(prob.n);
  sol.ub_duals = VectorXd::Zero(prob.n);
  for (std::size_t k = 0; k < st.fixed_vars.size(); ++k) {
    double d = nu[st.orig_eq_rows + static_cast<Eigen::Index>(k)];
    sol.ub_duals[st.fixed_vars[k]] = std::max(d, 0.0);
    sol.lb_duals[st.fixed_vars[k]] = std::max(-d, 0.0);
  }
  Eigen::Index gi = 0;
  for (int r : st.in_row_map) sol.in_duals[r] = z[gi++];
  for (int v : st.ub_vars) sol.ub_duals[v] = z[gi++];
  for (int v : st.lb_vars) sol.lb_duals[v] = z[gi++];
  KktResiduals res = kkt_residuals(prob, sol);
  sol.primal_residual = res.primal;
  sol.dual_residual = res.dual;
  sol.complementarity = res.complementarity;
  return sol;
}

// Direct solve when there are no inequalities at all: the KKT system is
// linear. Singular cases are classified by checking whether the equality
// system is consistent.
QpSolution solve_equality_only(const QuadraticProgram& prob,
                               const Standardized& st, double tol) {
  const int n = prob.n;
  const int me = static_cast<int>(st.A.rows());
  MatrixXd K = MatrixXd::Zero(n + me, n + me);
  for (int k = 0; k < prob.Q.outerSize(); ++k)
    for (SpMat::InnerIterator it(prob.Q, k); it; ++it)
      K(it.row(), it.col()) += it.value();
  for (int k = 0; k < st.A.outerSize(); ++k)
    for (SpMat::InnerIterator it(st.A, k); it; ++it) {
      K(n + it.row(), it.col()) += it.value();
      K(it.col(), n + it.row()) += it.value();
    }
  VectorXd rhs(n + me);
  rhs.head(n) = -prob.c;
  rhs.tail(me) = st.b;
  Eigen::FullPivLU<MatrixXd> lu(K);
  VectorXd sol = lu.solve(rhs);
  VectorXd err = K * sol - rhs;
  double scale = 1.0 + inf_norm(rhs) + inf_norm(sol);
  VectorXd x = sol.head(n), nu = sol.tail(me);
  if (inf_norm(err) <= std::max(tol, 1e-10) * scale)
    return finish(prob, st, SolveStatus::kOptimal, x, nu, VectorXd(), 0);
  // Singular and inconsistent: decide which side failed.
  SolveStatus status = SolveStatus::kUnbounded;
  if (me > 0) {
    MatrixXd Ad(st.A);
    VectorXd xls = Ad.colPivHouseholderQr().solve(st.b);
    if (inf_norm(VectorXd(Ad * xls - st.b)) >
        1e-8 * (1.0 + inf_norm(st.b) + inf_norm(xls)))
      status = SolveStatus::kInfeasible;
    else
      x = xls;
  }
  return finish(prob, st, status, x, nu, VectorXd(), 0);
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

void QuadraticProgram::validate() const {
  auto bad = [](const char* what) { throw ValidationError(std::string("qp: ") + what); };
  if (n < 0) bad("negative dimension");
  if (Q.rows() != n || Q.cols() != n) bad("Q dimension mismatch");
  if (c.size() != n) bad("c dimension mismatch");
  if (A_eq.cols() != n && A_eq.rows() > 0) bad("A_eq dimension mismatch");
  if (b_eq.size() != A_eq.rows()) bad("b_eq dimension mismatch");
  if (A_in.cols() != n && A_in.rows() > 0) bad("A_in dimension mismatch");
  if (b_in.size() != A_in.rows()) bad("b_in dimension mismatch");
  if (lb.size() != n || ub.size() != n) bad("bound dimension mismatch");
  if (!eq_labels.empty() &&
      eq_labels.size() != static_cast<std::size_t>(A_eq.rows()))
    bad("eq label count mismatch");
  if (!in_labels.empty() &&
      in_labels.size() != static_cast<std::size_t>(A_in.rows()))
    bad("in label count mismatch");
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (!std::isfinite(c[i])) bad("non-finite entry in c");
  for (Eigen::Index i = 0; i < b_eq.size(); ++i)
    if (!std::isfinite(b_eq[i])) bad("non-finite entry in b_eq");
  for (Eigen::Index i = 0; i < b_in.size(); ++i)
    if (std::isnan(b_in[i]) || b_in[i] == -kInf) bad("bad entry in b_in");
  for (int i = 0; i < n; ++i) {
    if (std::isnan(lb[i]) || std::isnan(ub[i])) bad("NaN bound");
    if (lb[i] > ub[i]) bad("lower bound above upper bound");
  }
  for (int k = 0; k < Q.outerSize(); ++k)
    for (SpMat::InnerIterator it(Q, k); it; ++it)
      if (!std::isfinite(it.value())) bad("non-finite entry in Q");
  SpMat d = SpMat(Q.transpose()) - Q;
  double qn = 0.0;
  for (int k = 0; k < Q.outerSize(); ++k)
    for (SpMat::InnerIterator it(Q, k); it; ++it)
      qn = std::max(qn, std::abs(it.value()));
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it)
      if (std::abs(it.value()) > 1e-12 * (1.0 + qn)) bad("Q not symmetric");
  if (n > 0 && n <= 50) {
    // Small instances get a full PSD check; large ones are diagonal by
    // construction in this project.
    Eigen::MatrixXd qd(Q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qd,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-7 * (1.0 + qn))
      bad("Q not positive semidefinite");
  }
}

double QpSolution::dual_for(const QuadraticProgram& prob,
                            const std::string& eq_label) const {
  for (std::size_t i = 0; i < prob.eq_labels.size(); ++i)
    if (prob.eq_labels[i] == eq_label)
      return eq_duals[static_cast<Eigen::Index>(i)];
  throw ValidationError("qp: no equality row labeled '" + eq_label + "'");
}

QpSolution solve(const QuadraticProgram& prob, const SolverOptions& opt) {
  prob.validate();
  const int n = prob.n;
  if (n == 0) {
    QpSolution sol;
    sol.status = SolveStatus::kOptimal;
    sol.objective = prob.c0;
    return sol;
  }

  Standardized st = standardize(prob);
  if (st.bound_conflict) {
    QpSolution sol;
    sol.status = SolveStatus::kInfeasible;
    sol.x = VectorXd::Zero(n);
    sol.eq_duals = VectorXd::Zero(prob.A_eq.rows());
    sol.in_duals = VectorXd::Zero(prob.A_in.rows());
    sol.lb_duals = VectorXd::Zero(n);
    sol.ub_duals = VectorXd::Zero(n);
    return sol;
  }

  const int me = static_cast<int>(st.A.rows());
  const int m = static_cast<int>(st.G.rows());
  if (m == 0) return solve_equality_only(prob, st, opt.tol);

  // Starting point: midpoint of bounded ranges, unit slacks elsewhere.
  VectorXd x = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double lo = prob.lb[i], hi = prob.ub[i];
    if (lo == hi) x[i] = lo;
    else if (std::isfinite(lo) && std::isfinite(hi)) x[i] = 0.5 * (lo + hi);
    else if (std::isfinite(lo)) x[i] = lo + 1.0;
    else if (std::isfinite(hi)) x[i] = hi - 1.0;
  }
  VectorXd s = (st.h - st.G * x).cwiseMax(1.0);
  VectorXd z = VectorXd::Ones(m);
  VectorXd nu = VectorXd::Zero(me);

  const double normbe = 1.0 + inf_norm(st.b);
  const double normh = 1.0 + finite_inf_norm(st.h);
  const bool dense = (n + me) <= opt.kkt_dense_max_dim;
  const double reg = 1e-10;
  KktSolver kkt(prob.Q, st.A, st.G, dense, reg);

  VectorXd best_x = x, best_nu = nu, best_z = z;
  double best_worst = std::numeric_limits<double>::infinity();
  SolveStatus status = SolveStatus::kIterationLimit;
  int iters = 0;
  Residuals best_res;

  for (int iter = 0; iter < opt.max_iter; ++iter) {
    iters = iter;
    VectorXd Qx = prob.Q * x;
    VectorXd r_dual =
        Qx + prob.c + st.A.transpose() * nu + st.G.transpose() * z;
    VectorXd r_eq = st.A * x - st.b;
    VectorXd r_in = st.G * x + s - st.h;
    double mu = s.dot(z) / m;
    double obj = 0.5 * x.dot(Qx) + prob.c.dot(x);

    Residuals res;
    res.rel_dual = inf_norm(r_dual) / (1.0 + inf_norm(prob.c) + inf_norm(Qx));
    res.rel_primal =
        std::max(me > 0 ? inf_norm(r_eq) / normbe : 0.0, inf_norm(r_in) / normh);
    res.rel_gap = mu / (1.0 + std::abs(obj));

    if (res.worst() < best_worst) {
      best_worst = res.worst();
      best_res = res;
      best_x = x;
      best_nu = nu;
      best_z = z;
    }
    if (res.rel_dual <= opt.tol && res.rel_primal <= opt.tol &&
        res.rel_gap <= opt.tol) {
      status = SolveStatus::kOptimal;
      best_x = x;
      best_nu = nu;
      best_z = z;
      break;
    }
    if (std::max(inf_norm(z), inf_norm(nu)) > 1e10 ||
        (res.rel_gap < 1e-11 && res.rel_primal > 1e-4)) {
      status = SolveStatus::kInfeasible;
      break;
    }
    if (inf_norm(x) > 1e10 || (res.rel_gap < 1e-11 && res.rel_dual > 1e-4)) {
      status = SolveStatus::kUnbounded;
      break;
    }

    VectorXd w = z.cwiseQuotient(s);
    kkt.factor(w);

    auto directions = [&](const VectorXd& rc, VectorXd* dx, VectorXd* dnu,
                          VectorXd* ds, VectorXd* dz) {
      VectorXd rhs_x =
          -r_dual - st.G.transpose() *
                        (rc.cwiseQuotient(s) + w.cwiseProduct(r_in));
      VectorXd rhs_e = -r_eq;
      kkt.solve(rhs_x, rhs_e, dx, dnu);
      *ds = -r_in - st.G * (*dx);
      *dz = (rc - z.cwiseProduct(*ds)).cwiseQuotient(s);
    };

    VectorXd dx, dnu, ds, dz;
    VectorXd rc = -s.cwiseProduct(z);
    directions(rc, &dx, &dnu, &ds, &dz);
    double ap = std::min(1.0, max_step(s, ds));
    double ad = std::min(1.0, max_step(z, dz));
    double mu_aff = (s + ap * ds).dot(z + ad * dz) / m;
    double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    // When the affine step collapses (badly mismatched starting duals) the
    // raw corrector can exceed the barrier scale by orders of magnitude and
    // send the iterates off to infinity; clipping degrades that iteration
    // towards plain centering instead.
    VectorXd corr = ds.cwiseProduct(dz);
    corr = corr.cwiseMax(-10.0 * mu).cwiseMin(10.0 * mu);
    rc = sigma * mu * VectorXd::Ones(m) - s.cwiseProduct(z) - corr;
    directions(rc, &dx, &dnu, &ds, &dz);

    double tau = res.rel_gap > 1e-6 ? 0.995 : 0.9995;
    ap = std::min(1.0, tau * max_step(s, ds));
    ad = std::min(1.0, tau * max_step(z, dz));
    x += ap * dx;
    s += ap * ds;
    nu += ad * dnu;
    z += ad * dz;
  }

  if (status == SolveStatus::kIterationLimit) {
    if (best_res.rel_gap < 1e-8 && best_res.rel_primal > 1e-6)
      status = SolveStatus::kInfeasible;
    else if (best_res.rel_gap < 1e-8 && best_res.rel_dual > 1e-6)
      status = SolveStatus::kUnbounded;
  }
  return finish(prob, st, status, best_x, best_nu, best_z, iters + 1);
}

KktResiduals kkt_residuals(const QuadraticProgram& prob, const QpSolution& sol) {
  KktResiduals out;
  const VectorXd& x = sol.x;
  if (x.size() != prob.n) throw ValidationError("qp: solution size mismatch");
  VectorXd Qx = prob.Q * x;
  double obj = 0.5 * x.dot(Qx) + prob.c.dot(x) + prob.c0;

  VectorXd stat = Qx + prob.c + sol.ub_duals - sol.lb_duals;
  if (prob.A_eq.rows() > 0) stat += prob.A_eq.transpose() * sol.eq_duals;
  if (prob.A_in.rows() > 0) stat += prob.A_in.transpose() * sol.in_duals;
  double dual_scale = 1.0 + inf_norm(prob.c) + inf_norm(Qx);
  out.dual = inf_norm(stat) / dual_scale;
  for (Eigen::Index i = 0; i < sol.in_duals.size(); ++i)
    out.dual = std::max(out.dual, -sol.in_duals[i] / dual_scale);
  for (int i = 0; i < prob.n; ++i) {
    out.dual = std::max(out.dual, -sol.lb_duals[i] / dual_scale);
    out.dual = std::max(out.dual, -sol.ub_duals[i] / dual_scale);
  }

  double p = 0.0;
  if (prob.A_eq.rows() > 0)
    p = inf_norm(VectorXd(prob.A_eq * x - prob.b_eq)) / (1.0 + inf_norm(prob.b_eq));
  if (prob.A_in.rows() > 0) {
    VectorXd viol = prob.A_in * x - prob.b_in;
    double scale = 1.0 + finite_inf_norm(prob.b_in);
    for (Eigen::Index i = 0; i < viol.size(); ++i)
      if (std::isfinite(prob.b_in[i]))
        p = std::max(p, viol[i] / scale);
  }
  double bscale = 1.0 + std::max(finite_inf_norm(prob.lb), finite_inf_norm(prob.ub));
  for (int i = 0; i < prob.n; ++i) {
    if (std::isfinite(prob.lb[i])) p = std::max(p, (prob.lb[i] - x[i]) / bscale);
    if (std::isfinite(prob.ub[i])) p = std::max(p, (x[i] - prob.ub[i]) / bscale);
  }
  out.primal = std::max(p, 0.0);

  double cscale = 1.0 + std::abs(obj);
  double comp = 0.0;
  if (prob.A_in.rows() > 0) {
    VectorXd ax = prob.A_in * x;
    for (Eigen::Index i = 0; i < prob.A_in.rows(); ++i) {
      if (!std::isfinite(prob.b_in[i])) continue;
      comp = std::max(comp, std::abs(sol.in_duals[i] * (prob.b_in[i] - ax[i])));
    }
  }
  for (int i = 0; i < prob.n; ++i) {
    if (std::isfinite(prob.lb[i]) && prob.lb[i] != prob.ub[i])
      comp = std::max(comp, std::abs(sol.lb_duals[i] * (x[i] - prob.lb[i])));
    if (std::isfinite(prob.ub[i]) && prob.lb[i] != prob.ub[i])
      comp = std::max(comp, std::abs(sol.ub_duals[i] * (prob.ub[i] - x[i])));
  }
  out.complementarity = comp / cscale;
  return out;
}

}  // namespace tdcoord::qp
