#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "procnet/graph.hpp"

namespace procnet {

/// Unweighted line graph of a market. Line node i is market edge i, so the
/// back map is the identity. Adjacency is stored as CSR.
class LineGraph {
 public:
  LineGraph() = default;
  LineGraph(std::vector<std::size_t> offsets, std::vector<std::uint32_t> neighbors);

  std::size_t n_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t n_edges() const { return neighbors_.size() / 2; }
  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  EdgeIndex market_edge(std::size_t v) const { return static_cast<EdgeIndex>(v); }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
};

struct LineGraphOptions {
  /// Refuse to build when sum_v C(deg v, 2) exceeds this many line edges.
  std::uint64_t max_line_edges = 100'000'000;
  unsigned threads = 1;
};

/// Line edges the market would produce: sum over market nodes of C(deg, 2).
std::uint64_t projected_line_edges(const MarketGraph& graph);

/// Throws DataError naming the largest hubs when the cap is exceeded, and for
/// a market without edges.
LineGraph build_line_graph(const MarketGraph& graph, const LineGraphOptions& options = {});

}  // namespace procnet
