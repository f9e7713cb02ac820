// SPDX-License-Identifier: Apache-2.0
#include "learn/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "learn/step_fit.hpp"

namespace tdcoord::learn {

NeighborSelection nearest_neighbors(const std::vector<HistoryRecord>& history,
                                    const std::vector<double>& context,
                                    const NeighborQuery& query) {
  if (history.empty()) throw ValidationError("neighbour search: empty history");
  if (query.k < 1) throw ValidationError("neighbour search: k must be at least 1");
  if (static_cast<std::size_t>(query.k) > history.size())
    throw ValidationError("neighbour search: k exceeds history size");
  const std::size_t f = context.size();
  for (double v : context)
    if (!std::isfinite(v)) throw ValidationError("neighbour search: non-finite context");
  for (const auto& rec : history) {
    if (rec.context.size() != f)
      throw ValidationError("neighbour search: context arity mismatch for hour " +
                            std::to_string(rec.hour));
    for (double v : rec.context)
      if (!std::isfinite(v))
        throw ValidationError("neighbour search: non-finite context in history hour " +
                              std::to_string(rec.hour));
  }
  std::vector<FeatureMetric> metrics = query.metrics;
  if (metrics.empty()) metrics.assign(f, FeatureMetric::kEuclidean);
  if (metrics.size() != f)
    throw ValidationError("neighbour search: metric list arity mismatch");

  const double n = static_cast<double>(history.size());
  std::vector<double> mean(f, 0.0), scale(f, 1.0);
  NeighborSelection out;
  out.constant_feature.assign(f, false);
  for (std::size_t j = 0; j < f; ++j) {
    if (metrics[j] == FeatureMetric::kHamming) continue;
    double m = 0.0;
    for (const auto& rec : history) m += rec.context[j];
    m /= n;
    double var = 0.0;
    for (const auto& rec : history) var += (rec.context[j] - m) * (rec.context[j] - m);
    double sd = std::sqrt(var / n);
    mean[j] = m;
    if (sd > 0.0) {
      scale[j] = sd;
    } else {
      out.constant_feature[j] = true;  // scale stays 1 so the term contributes 0
    }
  }

  struct Scored {
    double dist2;
    int hour;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      if (metrics[j] == FeatureMetric::kHamming) {
        d2 += history[i].context[j] == context[j] ? 0.0 : 1.0;
      } else {
        double d = (history[i].context[j] - context[j]) / scale[j];
        d2 += d * d;
      }
    }
    scored.push_back({d2, history[i].hour, i});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    if (a.hour != b.hour) return a.hour < b.hour;
    return a.index < b.index;
  });
  out.indices.reserve(query.k);
  for (int i = 0; i < query.k; ++i) out.indices.push_back(scored[i].index);
  return out;
}

double knn_forecast(const std::vector<HistoryRecord>& history,
                    const std::vector<double>& context, const NeighborQuery& query) {
  NeighborSelection sel = nearest_neighbors(history, context, query);
  double total = 0.0;
  for (std::size_t i : sel.indices) total += history[i].intake_mw;
  return total / static_cast<double>(sel.indices.size());
}

BidCurve learn_bid(const std::vector<HistoryRecord>& history,
                   const std::vector<double>& context, const NeighborQuery& query,
                   int max_blocks) {
  NeighborSelection sel = nearest_neighbors(history, context, query);
  std::vector<PricePoint> points;
  points.reserve(sel.indices.size());
  for (std::size_t i : sel.indices)
    points.push_back({history[i].lambda, history[i].intake_mw, 1.0});
  return fit_step_curve(points, max_blocks);
}

}  // namespace tdcoord::learn
