#include "procnet/line_graph.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "procnet/errors.hpp"

namespace procnet {

LineGraph::LineGraph(std::vector<std::size_t> offsets, std::vector<std::uint32_t> neighbors)
    : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)) {}

std::uint64_t projected_line_edges(const MarketGraph& graph) {
  std::uint64_t total = 0;
  for (NodeIndex v = 0; v < graph.n_nodes(); ++v) {
    const std::uint64_t d = graph.degree(v);
    total += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  return total;
}

LineGraph build_line_graph(const MarketGraph& graph, const LineGraphOptions& options) {
  if (graph.n_edges() == 0) throw DataError("line graph of a market without edges");

  const auto projected = projected_line_edges(graph);
  if (projected > options.max_line_edges) {
    std::vector<NodeIndex> hubs(graph.n_nodes());
    std::iota(hubs.begin(), hubs.end(), 0);
    const auto k = std::min<std::size_t>(5, hubs.size());
    std::partial_sort(hubs.begin(), hubs.begin() + static_cast<std::ptrdiff_t>(k), hubs.end(),
                      [&](NodeIndex a, NodeIndex b) { return graph.degree(a) > graph.degree(b); });
    std::string names;
    for (std::size_t i = 0; i < k; ++i) {
      if (i) names += ", ";
      names += graph.node_id(hubs[i]) + " (degree " + std::to_string(graph.degree(hubs[i])) + ")";
    }
    throw DataError("line graph would have " + std::to_string(projected) + " edges, above the cap of " +
                    std::to_string(options.max_line_edges) + "; largest hubs: " + names);
  }

  const auto n = graph.n_edges();
  std::vector<std::size_t> offsets(n + 1, 0);
  for (EdgeIndex e = 0; e < n; ++e) {
    const auto& edge = graph.edge(e);
    offsets[e + 1] = graph.degree(edge.issuer) + graph.degree(edge.winner) - 2;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::uint32_t> neighbors(offsets.back());

  // Each line node writes only its own range, so chunks fill independently.
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const auto& edge = graph.edge(static_cast<EdgeIndex>(e));
      auto out = neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[e]);
      for (NodeIndex endpoint : {edge.issuer, edge.winner}) {
        for (EdgeIndex f : graph.incident(endpoint)) {
          if (f != e) *out++ = f;
        }
      }
      std::sort(neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[e]), out);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    fill(0, n);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) workers.emplace_back(fill, n * t / threads, n * (t + 1) / threads);
  }
  return LineGraph(std::move(offsets), std::move(neighbors));
}

}  // namespace procnet
