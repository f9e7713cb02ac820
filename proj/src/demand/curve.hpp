// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace tdcoord::demand {

// Price-responsive demand that ramps linearly from its upper bound at the
// price floor to its lower bound at the price cap:
//   demand(price) = clamp(alpha - beta*price, p_min, p_max)
// with p_min = baseline*(1-delta), p_max = baseline*(1+delta). A consumer
// with delta = 0 is a fixed load (beta = 0) and carries no welfare term.
struct Curve {
  double alpha = 0.0;
  double beta = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double price_floor = 0.0;
  double price_cap = 0.0;

  bool flexible() const { return beta > 0.0; }
};

// Requires baseline >= 0, 0 <= delta <= 1, price_cap > price_floor >= 0.
Curve make_curve(double baseline, double delta, double price_floor,
                 double price_cap);

double demand_at_price(const Curve& c, double price);

// Consumption surplus relative to the minimum consumption p_min; the
// marginal utility runs from price_cap at p_min down to price_floor at
// p_max, so utility is concave quadratic. Requires a flexible curve and
// p within [p_min, p_max] up to roundoff; fixed loads carry no utility
// term and must be skipped by welfare computations.
double utility(const Curve& c, double p);

}  // namespace tdcoord::demand
