// SPDX-License-Identifier: Apache-2.0
#include "learn/bid_curve.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace tdcoord::learn {

void BidCurve::validate() const {
  if (!std::isfinite(base_quantity))
    throw ValidationError("bid curve: non-finite base quantity");
  double prev_q = base_quantity;
  double prev_p = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& blk = blocks[i];
    if (!std::isfinite(blk.price) || !std::isfinite(blk.quantity))
      throw ValidationError("bid curve: non-finite block " + std::to_string(i));
    if (i > 0 && !(blk.price < prev_p))
      throw ValidationError("bid curve: breakpoints must strictly decrease");
    if (!(blk.quantity >= prev_q))
      throw ValidationError("bid curve: quantities must not decrease");
    prev_p = blk.price;
    prev_q = blk.quantity;
  }
}

double evaluate_curve(const BidCurve& curve, double price) {
  double q = curve.base_quantity;
  for (const auto& blk : curve.blocks) {
    if (price < blk.price)
      q = blk.quantity;
    else
      break;
  }
  return q;
}

}  // namespace tdcoord::learn
