// SPDX-License-Identifier: Apache-2.0
#pragma once

// The four coordination strategies behind one interface, and the five-step
// hourly evaluation: clear the market, let every distribution network
// respond to its posted price, measure the imbalance, redispatch the
// transmission side, and account the realized welfare.

#include <optional>
#include <string>
#include <vector>

#include "grid/model.hpp"
#include "learn/history.hpp"
#include "opf/transmission.hpp"

namespace tdcoord::coord {

enum class StrategyKind {
  kBenchmark,      // BN: distribution networks embedded in full
  kSingleBus,      // SB: their resources copied onto the host bus
  kPriceAgnostic,  // PAG: intake pinned to a nearest-neighbour forecast
  kPriceAware,     // PAW: learned block bid cleared with the market
};

const char* to_string(StrategyKind k);
StrategyKind strategy_from_string(const std::string& tag);

struct Strategy {
  StrategyKind kind = StrategyKind::kBenchmark;
  int neighbors = 10;   // history points consulted (PAG, PAW)
  int max_blocks = 8;   // bid-curve breakpoints (PAW)
};

// Context features describing an hour to the learners: the network's
// aggregate baseline demand, its capacity-weighted solar availability, and
// the transmission-level wind availability.
std::vector<double> context_for(const grid::PowerSystem& sys, int dn_index, int t);

struct DnOutcome {
  std::string dn_id;
  double lambda = 0.0;            // posted boundary price
  double forecast_mw = 0.0;       // intake the clearing assumed
  double actual_mw = 0.0;         // optimal response at the posted price
  double welfare_at_price = 0.0;  // utility - cost - lambda*intake
};

struct HourReport {
  int hour = 0;
  StrategyKind strategy = StrategyKind::kBenchmark;
  std::vector<DnOutcome> dns;
  double forecast_mw = 0.0;  // aggregate intake assumed at clearing
  double actual_mw = 0.0;    // aggregate realized intake
  std::optional<double> delta_pct;  // missing when actual is exactly zero
  double sw_d = 0.0;
  double sw_t = 0.0;      // free-adaptation: slack carries no penalty
  double sw_total = 0.0;  // sw_d + sw_t
  double sw_t_penalized = 0.0;
  double sw_total_penalized = 0.0;
  double slack_mw = 0.0;
  double flex_forecast_pct = 0.0;
  double flex_observed_pct = 0.0;
  double clearing_welfare = 0.0;
  double clear_seconds = 0.0;
};

struct ClearResult {
  opf::TransmissionDispatch tx;
  std::vector<opf::DnModel> models;  // how each DN entered the clearing
};

// Step 1. PAG and PAW require history rows for every DN.
ClearResult clear_market(const Strategy& strategy, const grid::PowerSystem& sys,
                         int t, const std::vector<learn::HistoryRecord>& history,
                         const opf::ClearingOptions& opt);

struct DnResponses {
  std::vector<opf::DistributionDispatch> dispatches;  // one per DN
  double sw_d = 0.0;
};

// Step 2: every DN solves its own network-constrained response at the
// posted price.
DnResponses actual_dn_response(const grid::PowerSystem& sys, int t,
                               const std::vector<double>& lambda,
                               const opf::DnOptions& opt);

// Step 3: 100*|forecast - actual|/|actual|; empty when actual is zero.
std::optional<double> power_imbalance(double forecast_mw, double actual_mw);

// Steps 1-5 composed. When models_out is given it receives the DN models
// the clearing used (e.g. the learned bid curves).
HourReport evaluate_hour(const Strategy& strategy, const grid::PowerSystem& sys,
                         int t, const std::vector<learn::HistoryRecord>& history,
                         const opf::ClearingOptions& opt,
                         std::vector<opf::DnModel>* models_out = nullptr);

struct WelfareShares {
  double tso_pct = 0.0;  // mean 100*(sw_t_bn - sw_t)/sw_bn
  double dso_pct = 0.0;  // mean 100*(sw_d_bn - sw_d)/sw_bn
};

// Splits the average welfare loss against the benchmark between the
// transmission and distribution sides; the shares sum to the total loss.
WelfareShares welfare_allocation(const std::vector<HourReport>& reports,
                                 const std::vector<HourReport>& bn_reports);

}  // namespace tdcoord::coord
