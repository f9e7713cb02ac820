// SPDX-License-Identifier: Apache-2.0
#include "learn/step_fit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "core/error.hpp"

namespace tdcoord::learn {
namespace {

struct MergedPoints {
  std::vector<double> price;   // strictly increasing
  std::vector<double> value;   // weighted mean quantity per price
  std::vector<double> weight;  // total weight per price
};

void check_points(const std::vector<PricePoint>& points) {
  if (points.empty()) throw ValidationError("step fit: no points");
  for (const auto& pt : points) {
    if (!std::isfinite(pt.price) || !std::isfinite(pt.quantity) ||
        !std::isfinite(pt.weight))
      throw ValidationError("step fit: non-finite point");
    if (!(pt.weight > 0.0)) throw ValidationError("step fit: weight must be positive");
  }
}

MergedPoints merge_duplicates(std::vector<PricePoint> points) {
  std::sort(points.begin(), points.end(),
            [](const PricePoint& a, const PricePoint& b) { return a.price < b.price; });
  MergedPoints out;
  for (const auto& pt : points) {
    if (!out.price.empty() && pt.price == out.price.back()) {
      double w = out.weight.back() + pt.weight;
      out.value.back() += (pt.quantity - out.value.back()) * pt.weight / w;
      out.weight.back() = w;
    } else {
      out.price.push_back(pt.price);
      out.value.push_back(pt.quantity);
      out.weight.push_back(pt.weight);
    }
  }
  return out;
}

// Prefix sums over merged points for O(1) segment statistics.
struct SegmentStats {
  std::vector<double> w;   // cumulative weight
  std::vector<double> wy;  // cumulative weight * value
  std::vector<double> wyy;

  explicit SegmentStats(const MergedPoints& m)
      : w(m.price.size() + 1, 0.0), wy(m.price.size() + 1, 0.0), wyy(m.price.size() + 1, 0.0) {
    for (std::size_t i = 0; i < m.price.size(); ++i) {
      w[i + 1] = w[i] + m.weight[i];
      wy[i + 1] = wy[i] + m.weight[i] * m.value[i];
      wyy[i + 1] = wyy[i] + m.weight[i] * m.value[i] * m.value[i];
    }
  }

  double mean(int s, int e) const { return (wy[e + 1] - wy[s]) / (w[e + 1] - w[s]); }
  double sse(int s, int e) const {
    double sw = w[e + 1] - w[s];
    double sy = wy[e + 1] - wy[s];
    return std::max(0.0, (wyy[e + 1] - wyy[s]) - sy * sy / sw);
  }
  double seg_weight(int s, int e) const { return w[e + 1] - w[s]; }
};

// Curve from segment boundaries (ascending price). Adjacent segments whose
// means coincide within eps are fused so levels strictly decrease.
BidCurve build_curve(const MergedPoints& m, const SegmentStats& st,
                     std::vector<std::pair<int, int>> segs, double eps) {
  std::vector<std::pair<int, int>> fused;
  for (const auto& seg : segs) {
    if (!fused.empty() &&
        std::abs(st.mean(fused.back().first, fused.back().second) - st.mean(seg.first, seg.second)) <= eps)
      fused.back().second = seg.second;
    else
      fused.push_back(seg);
  }
  BidCurve curve;
  curve.base_quantity = st.mean(fused.back().first, fused.back().second);
  for (int i = static_cast<int>(fused.size()) - 2; i >= 0; --i) {
    BidCurve::Block blk;
    blk.price = 0.5 * (m.price[fused[i].second] + m.price[fused[i + 1].first]);
    blk.quantity = st.mean(fused[i].first, fused[i].second);
    curve.blocks.push_back(blk);
  }
  curve.validate();
  return curve;
}

double value_scale(const MergedPoints& m) {
  double s = 0.0;
  for (double v : m.value) s = std::max(s, std::abs(v));
  return 1.0 + s;
}

}  // namespace

std::vector<double> pava_nonincreasing(const std::vector<double>& values,
                                       const std::vector<double>& weights) {
  if (values.empty()) throw ValidationError("isotonic fit: no values");
  if (values.size() != weights.size())
    throw ValidationError("isotonic fit: value/weight size mismatch");
  struct Block {
    double mean, weight;
    int count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !(weights[i] > 0.0))
      throw ValidationError("isotonic fit: bad value or weight at " + std::to_string(i));
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 1].mean > blocks[blocks.size() - 2].mean) {
      Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      double w = prev.weight + top.weight;
      prev.mean += (top.mean - prev.mean) * top.weight / w;
      prev.weight = w;
      prev.count += top.count;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(values.size());
  for (const auto& blk : blocks) fitted.insert(fitted.end(), blk.count, blk.mean);
  return fitted;
}

BidCurve fit_step_curve(const std::vector<PricePoint>& points, int max_blocks) {
  if (max_blocks < 0) throw ValidationError("step fit: negative block count");
  check_points(points);
  MergedPoints m = merge_duplicates(points);
  SegmentStats st(m);
  const int n = static_cast<int>(m.price.size());
  const int levels = std::min(max_blocks + 1, n);
  const double eps = 1e-9 * value_scale(m);
  const double inf = std::numeric_limits<double>::infinity();

  // cost[j][s][e]: best SSE of a fit over points 0..e using j levels whose
  // last segment is [s, e], with segment means non-increasing in price.
  auto idx = [n](int s, int e) { return s * n + e; };
  std::vector<std::vector<double>> cost(levels + 1, std::vector<double>(n * n, inf));
  std::vector<std::vector<int>> prev(levels + 1, std::vector<int>(n * n, -1));
  for (int e = 0; e < n; ++e) cost[1][idx(0, e)] = st.sse(0, e);

  struct Entry {
    double mean, best;
    int arg;
  };
  for (int j = 2; j <= levels; ++j) {
    for (int f = j - 2; f < n - 1; ++f) {
      // Candidate predecessors ending at f, ordered by mean descending with
      // running best cost, so each query is a binary search.
      std::vector<Entry> cands;
      for (int s = 0; s <= f; ++s) {
        double c = cost[j - 1][idx(s, f)];
        if (c < inf) cands.push_back({st.mean(s, f), c, s});
      }
      if (cands.empty()) continue;
      std::sort(cands.begin(), cands.end(),
                [](const Entry& a, const Entry& b) { return a.mean > b.mean; });
      for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i - 1].best <= cands[i].best) {
          cands[i].best = cands[i - 1].best;
          cands[i].arg = cands[i - 1].arg;
        }
      for (int e = f + 1; e < n; ++e) {
        double need = st.mean(f + 1, e) - eps;
        auto it = std::partition_point(cands.begin(), cands.end(),
                                       [need](const Entry& c) { return c.mean >= need; });
        if (it == cands.begin()) continue;
        const Entry& best = *(it - 1);
        double total = best.best + st.sse(f + 1, e);
        if (total < cost[j][idx(f + 1, e)]) {
          cost[j][idx(f + 1, e)] = total;
          prev[j][idx(f + 1, e)] = best.arg;
        }
      }
    }
  }

  int best_j = 1, best_s = 0;
  double best_cost = cost[1][idx(0, n - 1)];
  for (int j = 2; j <= levels; ++j)
    for (int s = 0; s < n; ++s)
      if (cost[j][idx(s, n - 1)] < best_cost - 1e-15 * (1.0 + best_cost)) {
        best_cost = cost[j][idx(s, n - 1)];
        best_j = j;
        best_s = s;
      }

  std::vector<std::pair<int, int>> segs;
  int j = best_j, s = best_s, e = n - 1;
  while (true) {
    segs.emplace_back(s, e);
    if (j == 1) break;
    int ps = prev[j][idx(s, e)];
    e = s - 1;
    s = ps;
    --j;
  }
  std::reverse(segs.begin(), segs.end());
  return build_curve(m, st, std::move(segs), eps);
}

BidCurve brute_force_step_fit(const std::vector<PricePoint>& points, int max_blocks) {
  if (max_blocks < 0) throw ValidationError("step fit: negative block count");
  check_points(points);
  MergedPoints m = merge_duplicates(points);
  SegmentStats st(m);
  const int n = static_cast<int>(m.price.size());
  if (n > 14) throw ValidationError("exhaustive step fit limited to 14 distinct prices");

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> best_segs;
  std::vector<double> best_levels;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    if (std::popcount(mask) > max_blocks) continue;
    std::vector<std::pair<int, int>> segs;
    int start = 0;
    for (int i = 0; i < n - 1; ++i)
      if (mask & (1u << i)) {
        segs.emplace_back(start, i);
        start = i + 1;
      }
    segs.emplace_back(start, n - 1);

    std::vector<double> means, weights;
    double within = 0.0;
    for (const auto& seg : segs) {
      means.push_back(st.mean(seg.first, seg.second));
      weights.push_back(st.seg_weight(seg.first, seg.second));
      within += st.sse(seg.first, seg.second);
    }
    std::vector<double> levels = pava_nonincreasing(means, weights);
    double total = within;
    for (std::size_t i = 0; i < segs.size(); ++i)
      total += weights[i] * (means[i] - levels[i]) * (means[i] - levels[i]);
    if (total < best_cost) {
      best_cost = total;
      best_segs = segs;
      best_levels = levels;
    }
  }

  // Fuse segments sharing a fitted level, then rebuild from the data so the
  // reported levels are exact weighted means.
  std::vector<std::pair<int, int>> fused;
  for (std::size_t i = 0; i < best_segs.size(); ++i) {
    if (i > 0 && best_levels[i] == best_levels[i - 1])
      fused.back().second = best_segs[i].second;
    else
      fused.push_back(best_segs[i]);
  }
  return build_curve(m, st, std::move(fused), 1e-9 * value_scale(m));
}

double curve_sse(const BidCurve& curve, const std::vector<PricePoint>& points) {
  check_points(points);
  curve.validate();
  double total = 0.0;
  for (const auto& pt : points) {
    double err = evaluate_curve(curve, pt.price) - pt.quantity;
    total += pt.weight * err * err;
  }
  return total;
}

}  // namespace tdcoord::learn
