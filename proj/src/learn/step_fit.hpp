// SPDX-License-Identifier: Apache-2.0
#pragma once

// Fits non-increasing step functions (block bid curves) to observed
// price/quantity pairs by weighted least squares.

#include <vector>

#include "learn/bid_curve.hpp"

namespace tdcoord::learn {

struct PricePoint {
  double price = 0.0;
  double quantity = 0.0;
  double weight = 1.0;
};

// Weighted isotonic regression under a non-increasing constraint.
// Returns the fitted value for each input position. Weights must be
// positive and the input non-empty.
std::vector<double> pava_nonincreasing(const std::vector<double>& values,
                                       const std::vector<double>& weights);

// Best step curve with at most max_blocks price breakpoints (so at most
// max_blocks + 1 quantity levels). Globally minimizes the weighted sum of
// squared quantity errors over all admissible curves. Breakpoints are
// placed halfway between adjacent distinct observed prices; duplicate
// prices are merged into one weighted point first.
BidCurve fit_step_curve(const std::vector<PricePoint>& points, int max_blocks);

// Exhaustive reference fit, usable for small inputs only (at most 14
// distinct prices). Same objective and admissible set as fit_step_curve.
BidCurve brute_force_step_fit(const std::vector<PricePoint>& points,
                              int max_blocks);

// Weighted sum of squared errors of a curve against observations.
double curve_sse(const BidCurve& curve, const std::vector<PricePoint>& points);

}  // namespace tdcoord::learn
