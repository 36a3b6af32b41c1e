#include "procnet/core.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>
#include <tuple>

#include "procnet/csv.hpp"

namespace procnet {

std::vector<std::int64_t> weighted_core_numbers(const MarketGraph& graph, std::span<const std::uint32_t> tie_rank) {
  const auto n = graph.n_nodes();
  std::vector<std::int64_t> degree(n);
  for (NodeIndex v = 0; v < n; ++v) degree[v] = graph.strength(v);
  auto rank = [&](NodeIndex v) -> std::uint32_t { return tie_rank.empty() ? v : tie_rank[v]; };

  using Entry = std::tuple<std::int64_t, std::uint32_t, NodeIndex>;  // degree, tie rank, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (NodeIndex v = 0; v < n; ++v) heap.emplace(degree[v], rank(v), v);

  std::vector<std::int64_t> core(n, 0);
  std::vector<std::uint8_t> removed(n, 0);
  std::int64_t level = 0;
  while (!heap.empty()) {
    const auto [d, r, v] = heap.top();
    heap.pop();
    if (removed[v] || d != degree[v]) continue;  // stale entry
    removed[v] = 1;
    level = std::max(level, d);
    core[v] = level;
    for (EdgeIndex e : graph.incident(v)) {
      const auto& edge = graph.edge(e);
      const NodeIndex u = edge.issuer == v ? edge.winner : edge.issuer;
      if (removed[u]) continue;
      degree[u] -= edge.stats.weight;
      heap.emplace(degree[u], rank(u), u);
    }
  }
  return core;
}

CorePartition core_membership(const MarketGraph& graph, std::vector<std::int64_t> core_numbers,
                              CoreThreshold threshold) {
  CorePartition p;
  const auto n = graph.n_nodes();
  const auto n_i = graph.n_issuers();
  auto node_weight = [&](NodeIndex v) {
    return threshold == CoreThreshold::MeanStrength ? static_cast<double>(graph.strength(v))
                                                    : static_cast<double>(graph.degree(v));
  };
  double sum_i = 0, sum_w = 0;
  for (NodeIndex v = 0; v < n; ++v) (graph.is_issuer(v) ? sum_i : sum_w) += node_weight(v);
  p.issuer_threshold = n_i ? sum_i / static_cast<double>(n_i) : 0.0;
  p.winner_threshold = graph.n_winners() ? sum_w / static_cast<double>(graph.n_winners()) : 0.0;

  p.is_core.assign(n, 0);
  for (NodeIndex v = 0; v < n; ++v) {
    const double t = graph.is_issuer(v) ? p.issuer_threshold : p.winner_threshold;
    if (static_cast<double>(core_numbers[v]) > t) {
      p.is_core[v] = 1;
      (graph.is_issuer(v) ? p.core_issuers : p.core_winners).push_back(v);
    }
  }
  p.core_number = std::move(core_numbers);
  return p;
}

namespace {

bool is_core_edge(const CorePartition& p, const MarketEdge& e) { return p.is_core[e.issuer] && p.is_core[e.winner]; }

}  // namespace

CoreStats core_stats(const MarketGraph& graph, const CorePartition& partition) {
  CoreStats s;
  std::vector<std::uint8_t> touched(graph.n_nodes(), 0);
  std::int64_t eligible = 0, single = 0;
  for (const auto& e : graph.edges()) {
    if (!is_core_edge(partition, e)) continue;
    ++s.core_n_edges;
    s.core_contracts += e.stats.weight;
    single += e.stats.single_bid_count;
    for (auto c : e.stats.contracts) eligible += graph.contracts()[c].has_bids ? 1 : 0;
    touched[e.issuer] = touched[e.winner] = 1;
  }
  for (NodeIndex v = 0; v < graph.n_nodes(); ++v) {
    if (touched[v]) ++(graph.is_issuer(v) ? s.core_n_issuers : s.core_n_winners);
  }
  s.core_share = static_cast<double>(s.core_contracts) / static_cast<double>(graph.n_contracts());
  if (eligible > 0) s.core_single_bidding_rate = static_cast<double>(single) / static_cast<double>(eligible);
  return s;
}

std::optional<double> core_single_bidding_rate(const MarketGraph& graph, const CorePartition& partition,
                                               std::span<const std::uint8_t> flags) {
  std::int64_t eligible = 0, single = 0;
  const auto contracts = graph.contracts();
  for (const auto& e : graph.edges()) {
    if (!is_core_edge(partition, e)) continue;
    for (auto c : e.stats.contracts) {
      if (!contracts[c].has_bids) continue;
      ++eligible;
      single += flags[c];
    }
  }
  if (eligible == 0) return std::nullopt;
  return static_cast<double>(single) / static_cast<double>(eligible);
}

void write_core_csv(std::ostream& out, const MarketGraph& graph, const CorePartition& partition) {
  csv::write_row(out, {"node_id", "role", "core_number", "is_core"});
  for (NodeIndex v = 0; v < graph.n_nodes(); ++v) {
    csv::write_row(out, {graph.node_id(v), std::string(to_string(graph.role(v))),
                         std::to_string(partition.core_number[v]), partition.is_core[v] ? "1" : "0"});
  }
}

}  // namespace procnet
