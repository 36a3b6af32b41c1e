#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "procnet/line_graph.hpp"

namespace procnet {

/// Community of every market edge (equivalently every line node).
struct EdgePartition {
  std::vector<std::uint32_t> community;  // dense ids from 0, numbered by first appearance
  std::size_t n_communities = 0;
  double modularity = 0.0;
};

/// Newman-Girvan modularity of a node partition of the unweighted line graph.
/// Zero by convention when the graph has no edges.
double modularity(const LineGraph& graph, std::span<const std::uint32_t> community);

/// Multi-level Louvain. Each level sweeps nodes in an order shuffled from
/// `seed`; a node moves only on strictly positive modularity gain. Levels
/// aggregate communities until a sweep moves nothing. Same seed, same output.
EdgePartition louvain(const LineGraph& graph, std::uint64_t seed);

/// CSV issuer_id,winner_id,community.
void write_partition_csv(std::ostream& out, const MarketGraph& graph, const EdgePartition& partition);

}  // namespace procnet
