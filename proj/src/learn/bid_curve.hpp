// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace tdcoord::learn {

// Non-increasing step function mapping price to quantity. The base quantity
// applies at prices >= the first breakpoint; each block b extends the
// quantity to blocks[b].quantity on [next breakpoint, blocks[b].price).
struct BidCurve {
  struct Block {
    double price = 0.0;     // breakpoint, strictly decreasing across blocks
    double quantity = 0.0;  // cumulative MW, non-decreasing across blocks
  };

  double base_quantity = 0.0;
  std::vector<Block> blocks;

  // Throws ValidationError when block prices are not strictly decreasing,
  // quantities are not non-decreasing from the base, or values are not
  // finite.
  void validate() const;
};

// Half-open interval semantics: price >= first breakpoint gives the base
// quantity; price in [blocks[b+1].price, blocks[b].price) gives
// blocks[b].quantity; below the last breakpoint the last quantity applies.
double evaluate_curve(const BidCurve& curve, double price);

}  // namespace tdcoord::learn
