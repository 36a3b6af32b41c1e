#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "procnet/graph.hpp"

namespace procnet {

/// Descriptive statistics of one market. Standard deviations are population
/// (divide by n) over the nodes of a class.
struct MarketStats {
  std::int64_t n_contracts = 0;
  std::int64_t n_winners = 0;
  std::int64_t n_issuers = 0;
  std::int64_t n_edges = 0;
  double density = 0.0;
  std::optional<double> ra_clustering;
  double mean_strength_winners = 0.0;
  double std_strength_winners = 0.0;
  double mean_strength_issuers = 0.0;
  double std_strength_issuers = 0.0;
  std::int64_t n_risk_eligible = 0;  // contracts with a bid count
  std::int64_t n_single_bid = 0;
  std::optional<double> single_bidding_rate;  // n_single_bid / n_risk_eligible
};

MarketStats market_stats(const MarketGraph& graph);

struct CycleCounts {
  std::uint64_t four_cycles = 0;  // each cycle once
  std::uint64_t three_paths = 0;  // each undirected path on 4 distinct nodes once
};

/// 4-cycles from common-neighbour counts over issuer pairs; 3-paths from
/// sum over edges (u,v) of (deg u - 1)(deg v - 1). Edge weights are ignored.
CycleCounts count_cycles_and_paths(const MarketGraph& graph);

/// Robins-Alexander bipartite clustering 4*C4/L3, so every complete bipartite
/// graph scores 1. `scaled = false` returns the bare ratio C4/L3.
/// Undefined (nullopt) when the graph has no 3-paths.
std::optional<double> robins_alexander_clustering(const MarketGraph& graph, bool scaled = true);

/// Header plus one row per call, columns mirroring the summary table.
void write_stats_header(std::ostream& out);
void write_stats_row(std::ostream& out, const std::string& country, const std::string& period,
                     const MarketStats& stats);

}  // namespace procnet
