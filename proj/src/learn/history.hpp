// SPDX-License-Identifier: Apache-2.0
#pragma once

// Operating history records: one row per (hour, distribution network) with
// the context features, the cleared boundary price, and the active-power
// intake the network actually drew at that price.

#include <string>
#include <vector>

#include "learn/bid_curve.hpp"

namespace tdcoord::learn {

struct HistoryRecord {
  int hour = 0;
  std::string dn_id;
  std::vector<double> context;
  double lambda = 0.0;     // boundary price, currency/MWh
  double intake_mw = 0.0;  // import from the transmission grid
};

// history.csv: hour,dn_id,feature_1..feature_F,lambda,p_n
void write_history(const std::vector<HistoryRecord>& records, const std::string& path);
std::vector<HistoryRecord> read_history(const std::string& path);

std::vector<HistoryRecord> records_for(const std::vector<HistoryRecord>& records,
                                       const std::string& dn_id);

struct LabeledBid {
  std::string dn_id;
  int hour = 0;
  BidCurve curve;
};

// bids.csv: dn_id,hour,level_index,breakpoint_price,cumulative_mw with one
// row per quantity level; level 0 is the base quantity and carries no
// breakpoint price.
void write_bids(const std::vector<LabeledBid>& bids, const std::string& path);
std::vector<LabeledBid> read_bids(const std::string& path);

}  // namespace tdcoord::learn
