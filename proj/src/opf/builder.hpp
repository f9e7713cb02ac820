// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qp/problem.hpp"

namespace tdcoord::opf {

// Incremental assembly of a QuadraticProgram with named variables and
// labeled rows. All cost quadratics in this project are separable, so Q is
// diagonal. Insertion order is deterministic and defines variable/row
// indices.
class QpBuilder {
 public:
  using Terms = std::vector<std::pair<int, double>>;

  int add_var(const std::string& name, double lb, double ub);
  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::string& var_name(int i) const { return names_[i]; }

  // Adds 0.5*coef*x_i^2 to the objective.
  void add_quad_cost(int i, double coef);
  void add_lin_cost(int i, double coef);
  void add_cost_offset(double v);

  void add_eq(const std::string& label, const Terms& terms, double rhs);
  // terms . x <= rhs
  void add_in(const std::string& label, const Terms& terms, double rhs);

  qp::QuadraticProgram build() const;

 private:
  std::vector<std::string> names_;
  std::vector<double> lb_, ub_, qdiag_, lin_;
  double offset_ = 0.0;
  std::vector<Eigen::Triplet<double>> eq_t_, in_t_;
  std::vector<double> eq_rhs_, in_rhs_;
  std::vector<std::string> eq_labels_, in_labels_;
};

}  // namespace tdcoord::opf
