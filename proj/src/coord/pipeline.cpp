// SPDX-License-Identifier: Apache-2.0
#include "coord/pipeline.hpp"

#include <chrono>
#include <cmath>

#include "core/error.hpp"
#include "learn/knn.hpp"

namespace tdcoord::coord {

const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::kBenchmark: return "BN";
    case StrategyKind::kSingleBus: return "SB";
    case StrategyKind::kPriceAgnostic: return "PAG";
    case StrategyKind::kPriceAware: return "PAW";
  }
  return "?";
}

StrategyKind strategy_from_string(const std::string& tag) {
  if (tag == "BN") return StrategyKind::kBenchmark;
  if (tag == "SB") return StrategyKind::kSingleBus;
  if (tag == "PAG") return StrategyKind::kPriceAgnostic;
  if (tag == "PAW") return StrategyKind::kPriceAware;
  throw ValidationError("unknown strategy tag: " + tag);
}

namespace {

void check_hour(const grid::PowerSystem& sys, int t) {
  if (t < 0 || t >= sys.horizon)
    throw ValidationError("hour " + std::to_string(t) +
                          " outside the horizon of " +
                          std::to_string(sys.horizon) + " hours");
}

}  // namespace

std::vector<double> context_for(const grid::PowerSystem& sys, int dn_index, int t) {
  const grid::Distribution& dn = sys.dns.at(dn_index);
  double demand = 0.0;
  for (const auto& con : dn.net.consumers) demand += con.baseline.at(t);
  double solar_cap = 0.0, solar_avail = 0.0;
  for (const auto& gen : dn.net.generators)
    if (gen.kind == grid::GenKind::kSolar) {
      solar_cap += gen.p_max;
      solar_avail += gen.p_max * gen.capacity_factor.at(t);
    }
  double wind_cap = 0.0, wind_avail = 0.0;
  for (const auto& gen : sys.transmission.generators)
    if (gen.kind == grid::GenKind::kWind) {
      wind_cap += gen.p_max;
      wind_avail += gen.p_max * gen.capacity_factor.at(t);
    }
  return {demand, solar_cap > 0.0 ? solar_avail / solar_cap : 0.0,
          wind_cap > 0.0 ? wind_avail / wind_cap : 0.0};
}

ClearResult clear_market(const Strategy& strategy, const grid::PowerSystem& sys,
                         int t, const std::vector<learn::HistoryRecord>& history,
                         const opf::ClearingOptions& opt) {
  check_hour(sys, t);
  ClearResult out;
  out.models.resize(sys.dns.size());
  for (std::size_t k = 0; k < sys.dns.size(); ++k) {
    opf::DnModel& model = out.models[k];
    switch (strategy.kind) {
      case StrategyKind::kBenchmark:
        model.kind = opf::DnModelKind::kEmbedded;
        break;
      case StrategyKind::kSingleBus:
        model.kind = opf::DnModelKind::kAggregated;
        break;
      case StrategyKind::kPriceAgnostic:
      case StrategyKind::kPriceAware: {
        std::vector<learn::HistoryRecord> mine =
            learn::records_for(history, sys.dns[k].net.id);
        if (mine.empty())
          throw ValidationError(std::string(to_string(strategy.kind)) +
                                " needs history for dn " + sys.dns[k].net.id);
        learn::NeighborQuery query;
        query.k = std::min<int>(strategy.neighbors, static_cast<int>(mine.size()));
        std::vector<double> ctx = context_for(sys, static_cast<int>(k), t);
        if (strategy.kind == StrategyKind::kPriceAgnostic) {
          model.kind = opf::DnModelKind::kFixed;
          model.fixed_import = learn::knn_forecast(mine, ctx, query);
        } else {
          model.kind = opf::DnModelKind::kBid;
          model.bid = learn::learn_bid(mine, ctx, query, strategy.max_blocks);
        }
        break;
      }
    }
  }
  out.tx = opf::solve_transmission(sys, t, out.models, opt);
  return out;
}

DnResponses actual_dn_response(const grid::PowerSystem& sys, int t,
                               const std::vector<double>& lambda,
                               const opf::DnOptions& opt) {
  check_hour(sys, t);
  if (lambda.size() != sys.dns.size())
    throw ValidationError("dn response: one price per network required");
  DnResponses out;
  out.dispatches.reserve(sys.dns.size());
  for (std::size_t k = 0; k < sys.dns.size(); ++k) {
    out.dispatches.push_back(opf::solve_distribution(sys.dns[k], t, lambda[k], opt));
    out.sw_d += out.dispatches.back().welfare_at_price;
  }
  return out;
}

std::optional<double> power_imbalance(double forecast_mw, double actual_mw) {
  if (actual_mw == 0.0) return std::nullopt;
  return 100.0 * std::abs(forecast_mw - actual_mw) / std::abs(actual_mw);
}

HourReport evaluate_hour(const Strategy& strategy, const grid::PowerSystem& sys,
                         int t, const std::vector<learn::HistoryRecord>& history,
                         const opf::ClearingOptions& opt,
                         std::vector<opf::DnModel>* models_out) {
  HourReport rep;
  rep.hour = t;
  rep.strategy = strategy.kind;

  auto t0 = std::chrono::steady_clock::now();
  ClearResult cleared = clear_market(strategy, sys, t, history, opt);
  rep.clear_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.clearing_welfare = cleared.tx.welfare;
  if (models_out) *models_out = cleared.models;

  DnResponses responses = actual_dn_response(sys, t, cleared.tx.dn_price, opt.dn_options());
  rep.sw_d = responses.sw_d;

  std::vector<double> actuals(sys.dns.size());
  double baseline = 0.0;
  for (std::size_t k = 0; k < sys.dns.size(); ++k) {
    actuals[k] = responses.dispatches[k].import_mw;
    DnOutcome outcome;
    outcome.dn_id = sys.dns[k].net.id;
    outcome.lambda = cleared.tx.dn_price[k];
    outcome.forecast_mw = cleared.tx.dn_import[k];
    outcome.actual_mw = actuals[k];
    outcome.welfare_at_price = responses.dispatches[k].welfare_at_price;
    rep.dns.push_back(std::move(outcome));
    rep.forecast_mw += cleared.tx.dn_import[k];
    rep.actual_mw += actuals[k];
    for (const auto& con : sys.dns[k].net.consumers) baseline += con.baseline.at(t);
  }
  rep.delta_pct = power_imbalance(rep.forecast_mw, rep.actual_mw);

  opf::TransmissionDispatch redispatch = opf::solve_redispatch(sys, t, actuals, opt);
  rep.slack_mw = redispatch.slack_mw;
  double revenue = 0.0;
  for (std::size_t k = 0; k < sys.dns.size(); ++k)
    revenue += cleared.tx.dn_price[k] * actuals[k];
  double penalty = std::max(opt.slack_penalty, 10.0 * opt.lambda_hi);
  rep.sw_t_penalized = redispatch.welfare + revenue;
  rep.sw_t = rep.sw_t_penalized + penalty * redispatch.slack_mw;
  rep.sw_total = rep.sw_d + rep.sw_t;
  rep.sw_total_penalized = rep.sw_d + rep.sw_t_penalized;

  if (baseline > 0.0) {
    rep.flex_forecast_pct = 100.0 * std::abs(rep.forecast_mw - baseline) / baseline;
    rep.flex_observed_pct = 100.0 * std::abs(rep.actual_mw - baseline) / baseline;
  }
  return rep;
}

WelfareShares welfare_allocation(const std::vector<HourReport>& reports,
                                 const std::vector<HourReport>& bn_reports) {
  if (reports.size() != bn_reports.size() || reports.empty())
    throw ValidationError("welfare allocation: mismatched report sets");
  WelfareShares shares;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].hour != bn_reports[i].hour)
      throw ValidationError("welfare allocation: hour mismatch");
    double base = bn_reports[i].sw_total;
    if (base == 0.0) throw ValidationError("welfare allocation: zero benchmark welfare");
    shares.tso_pct += 100.0 * (bn_reports[i].sw_t - reports[i].sw_t) / base;
    shares.dso_pct += 100.0 * (bn_reports[i].sw_d - reports[i].sw_d) / base;
  }
  shares.tso_pct /= static_cast<double>(reports.size());
  shares.dso_pct /= static_cast<double>(reports.size());
  return shares;
}

}  // namespace tdcoord::coord
