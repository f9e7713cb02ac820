// SPDX-License-Identifier: Apache-2.0
#pragma once

// Nearest-neighbour retrieval over operating history, used both to forecast
// intake directly and to select the observations a bid curve is fitted to.

#include <vector>

#include "learn/bid_curve.hpp"
#include "learn/history.hpp"

namespace tdcoord::learn {

enum class FeatureMetric { kEuclidean, kHamming };

struct NeighborQuery {
  int k = 1;
  // One entry per context feature; empty means all-Euclidean. Euclidean
  // features are standardised over the history before distances are taken;
  // Hamming features contribute 0/1 on exact mismatch.
  std::vector<FeatureMetric> metrics;
};

struct NeighborSelection {
  std::vector<std::size_t> indices;    // into the history vector, nearest first
  std::vector<bool> constant_feature;  // true where the history had zero spread
};

NeighborSelection nearest_neighbors(const std::vector<HistoryRecord>& history,
                                    const std::vector<double>& context,
                                    const NeighborQuery& query);

// Mean intake over the k nearest records.
double knn_forecast(const std::vector<HistoryRecord>& history,
                    const std::vector<double>& context, const NeighborQuery& query);

// Fits a block bid curve to the (price, intake) pairs of the k nearest
// records, with at most max_blocks breakpoints.
BidCurve learn_bid(const std::vector<HistoryRecord>& history,
                   const std::vector<double>& context, const NeighborQuery& query,
                   int max_blocks);

}  // namespace tdcoord::learn
