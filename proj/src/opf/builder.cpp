// SPDX-License-Identifier: Apache-2.0
#include "opf/builder.hpp"

#include "core/error.hpp"

namespace tdcoord::opf {

int QpBuilder::add_var(const std::string& name, double lb, double ub) {
  names_.push_back(name);
  lb_.push_back(lb);
  ub_.push_back(ub);
  qdiag_.push_back(0.0);
  lin_.push_back(0.0);
  return static_cast<int>(names_.size()) - 1;
}

void QpBuilder::add_quad_cost(int i, double coef) { qdiag_.at(i) += coef; }

void QpBuilder::add_lin_cost(int i, double coef) { lin_.at(i) += coef; }

void QpBuilder::add_cost_offset(double v) { offset_ += v; }

void QpBuilder::add_eq(const std::string& label, const Terms& terms, double rhs) {
  int row = static_cast<int>(eq_rhs_.size());
  for (auto [i, coef] : terms) {
    if (i < 0 || i >= num_vars())
      throw ValidationError("qp builder: bad variable index in row " + label);
    eq_t_.emplace_back(row, i, coef);
  }
  eq_rhs_.push_back(rhs);
  eq_labels_.push_back(label);
}

void QpBuilder::add_in(const std::string& label, const Terms& terms, double rhs) {
  int row = static_cast<int>(in_rhs_.size());
  for (auto [i, coef] : terms) {
    if (i < 0 || i >= num_vars())
      throw ValidationError("qp builder: bad variable index in row " + label);
    in_t_.emplace_back(row, i, coef);
  }
  in_rhs_.push_back(rhs);
  in_labels_.push_back(label);
}

qp::QuadraticProgram QpBuilder::build() const {
  qp::QuadraticProgram p;
  p.n = num_vars();
  p.Q.resize(p.n, p.n);
  std::vector<Eigen::Triplet<double>> qt;
  for (int i = 0; i < p.n; ++i)
    if (qdiag_[i] != 0.0) qt.emplace_back(i, i, qdiag_[i]);
  p.Q.setFromTriplets(qt.begin(), qt.end());
  p.c = Eigen::Map<const Eigen::VectorXd>(lin_.data(), p.n);
  p.c0 = offset_;
  p.A_eq.resize(static_cast<Eigen::Index>(eq_rhs_.size()), p.n);
  p.A_eq.setFromTriplets(eq_t_.begin(), eq_t_.end());
  p.b_eq = Eigen::Map<const Eigen::VectorXd>(
      eq_rhs_.data(), static_cast<Eigen::Index>(eq_rhs_.size()));
  p.eq_labels = eq_labels_;
  p.A_in.resize(static_cast<Eigen::Index>(in_rhs_.size()), p.n);
  p.A_in.setFromTriplets(in_t_.begin(), in_t_.end());
  p.b_in = Eigen::Map<const Eigen::VectorXd>(
      in_rhs_.data(), static_cast<Eigen::Index>(in_rhs_.size()));
  p.in_labels = in_labels_;
  p.lb = Eigen::Map<const Eigen::VectorXd>(lb_.data(), p.n);
  p.ub = Eigen::Map<const Eigen::VectorXd>(ub_.data(), p.n);
  return p;
}

}  // namespace tdcoord::opf
