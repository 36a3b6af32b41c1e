#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "procnet/graph.hpp"

namespace procnet {

/// Weighted core number of every node (indexed like the graph's nodes).
///
/// Peeling: repeatedly remove a node of minimum current weighted degree d and
/// assign it max(d, last assigned core number); removal lowers each neighbour's
/// degree by the connecting edge weight. Ties are broken by `tie_rank` (lower
/// first) when given, otherwise by node index. The result does not depend on
/// the tie order.
std::vector<std::int64_t> weighted_core_numbers(const MarketGraph& graph,
                                                std::span<const std::uint32_t> tie_rank = {});

enum class CoreThreshold {
  MeanStrength,  // mean weighted degree of the node class
  MeanDegree,    // mean unweighted degree, for sensitivity runs
};

struct CorePartition {
  std::vector<std::int64_t> core_number;
  double issuer_threshold = 0.0;
  double winner_threshold = 0.0;
  std::vector<std::uint8_t> is_core;  // per node
  std::vector<NodeIndex> core_issuers;
  std::vector<NodeIndex> core_winners;
};

/// A node is core when its core number strictly exceeds its class threshold.
CorePartition core_membership(const MarketGraph& graph, std::vector<std::int64_t> core_numbers,
                              CoreThreshold threshold = CoreThreshold::MeanStrength);

struct CoreStats {
  std::int64_t core_contracts = 0;
  double core_share = 0.0;
  // Nodes and edges touched by core contracts (edges with both endpoints core).
  std::int64_t core_n_winners = 0;
  std::int64_t core_n_issuers = 0;
  std::int64_t core_n_edges = 0;
  std::optional<double> core_single_bidding_rate;
};

CoreStats core_stats(const MarketGraph& graph, const CorePartition& partition);

/// Single-bid rate over core contracts under an arbitrary labelling (for the
/// null model). nullopt when no core contract carries a bid count.
std::optional<double> core_single_bidding_rate(const MarketGraph& graph, const CorePartition& partition,
                                               std::span<const std::uint8_t> flags);

/// CSV node_id,role,core_number,is_core.
void write_core_csv(std::ostream& out, const MarketGraph& graph, const CorePartition& partition);

}  // namespace procnet
