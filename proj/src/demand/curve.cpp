// SPDX-License-Identifier: Apache-2.0
#include "demand/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace tdcoord::demand {

Curve make_curve(double baseline, double delta, double price_floor,
                 double price_cap) {
  if (!(baseline >= 0.0) || !std::isfinite(baseline))
    throw ValidationError("demand: baseline must be >= 0, got " +
                          std::to_string(baseline));
  if (!(delta >= 0.0 && delta <= 1.0))
    throw ValidationError("demand: flexibility share must be in [0, 1], got " +
                          std::to_string(delta));
  if (!(price_cap > price_floor) || !(price_floor >= 0.0))
    throw ValidationError("demand: need price_cap > price_floor >= 0");
  Curve c;
  c.price_floor = price_floor;
  c.price_cap = price_cap;
  c.p_min = baseline * (1.0 - delta);
  c.p_max = baseline * (1.0 + delta);
  if (delta > 0.0 && baseline > 0.0) {
    const double span = price_cap - price_floor;
    c.alpha = baseline * (1.0 + delta * (price_cap + price_floor) / span);
    c.beta = 2.0 * baseline * delta / span;
  } else {
    c.alpha = baseline;
    c.beta = 0.0;
  }
  return c;
}

double demand_at_price(const Curve& c, double price) {
  if (!c.flexible()) return c.p_max;  // p_min == p_max == baseline
  return std::clamp(c.alpha - c.beta * price, c.p_min, c.p_max);
}

double utility(const Curve& c, double p) {
  if (!c.flexible())
    throw ValidationError(
        "demand: utility undefined for a fixed load; treat it as zero welfare");
  const double tol = 1e-7 * (1.0 + c.p_max);
  if (p < c.p_min - tol || p > c.p_max + tol)
    throw ValidationError("demand: consumption " + std::to_string(p) +
                          " outside [" + std::to_string(c.p_min) + ", " +
                          std::to_string(c.p_max) + "]");
  const double pc = std::clamp(p, c.p_min, c.p_max);
  return (c.alpha / c.beta) * (pc - c.p_min) -
         (pc * pc - c.p_min * c.p_min) / (2.0 * c.beta);
}

}  // namespace tdcoord::demand
