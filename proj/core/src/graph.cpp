#include "procnet/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "procnet/csv.hpp"
#include "procnet/errors.hpp"

namespace procnet {

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

MarketGraph MarketGraph::build(const ContractTable& table) {
  if (table.records.empty()) throw DataError("empty market");

  MarketGraph g;
  std::vector<std::string> issuers, winners, classes;
  issuers.reserve(table.size());
  winners.reserve(table.size());
  for (const auto& r : table.records) {
    issuers.push_back(r.issuer_id);
    winners.push_back(r.winner_id);
    classes.emplace_back(r.cpv.class2());
  }
  issuers = sorted_unique(std::move(issuers));
  winners = sorted_unique(std::move(winners));
  g.cpv_classes_ = sorted_unique(std::move(classes));
  if (issuers.size() + winners.size() >= std::numeric_limits<NodeIndex>::max()) {
    throw DataError("market too large for 32-bit node indices");
  }

  g.n_issuers_ = issuers.size();
  g.node_ids_ = std::move(issuers);
  g.node_ids_.insert(g.node_ids_.end(), winners.begin(), winners.end());

  std::unordered_map<std::string_view, NodeIndex> issuer_index, winner_index;
  issuer_index.reserve(g.n_issuers_);
  winner_index.reserve(g.n_winners());
  for (NodeIndex v = 0; v < g.n_nodes(); ++v) {
    (g.is_issuer(v) ? issuer_index : winner_index).emplace(g.node_ids_[v], v);
  }
  std::unordered_map<std::string_view, std::uint16_t> class_index;
  for (std::size_t c = 0; c < g.cpv_classes_.size(); ++c) class_index.emplace(g.cpv_classes_[c], c);

  // Per-record edge key, then edges in (issuer, winner) order.
  std::vector<std::uint64_t> keys(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.records[i];
    keys[i] = (std::uint64_t{issuer_index.at(r.issuer_id)} << 32) | winner_index.at(r.winner_id);
  }
  std::vector<std::uint64_t> edge_keys = keys;
  std::sort(edge_keys.begin(), edge_keys.end());
  edge_keys.erase(std::unique(edge_keys.begin(), edge_keys.end()), edge_keys.end());
  std::unordered_map<std::uint64_t, EdgeIndex> edge_of_key;
  edge_of_key.reserve(edge_keys.size());
  g.edges_.resize(edge_keys.size());
  for (EdgeIndex e = 0; e < edge_keys.size(); ++e) {
    edge_of_key.emplace(edge_keys[e], e);
    g.edges_[e].issuer = static_cast<NodeIndex>(edge_keys[e] >> 32);
    g.edges_[e].winner = static_cast<NodeIndex>(edge_keys[e] & 0xFFFFFFFFu);
  }

  g.contracts_.reserve(table.size());
  g.eligible_.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& r = table.records[i];
    const EdgeIndex e = edge_of_key.at(keys[i]);
    auto& stats = g.edges_[e].stats;
    stats.contracts.push_back(static_cast<std::uint32_t>(i));
    ++stats.weight;
    if (r.single_bid) ++stats.single_bid_count;
    const bool has_bids = r.n_bids.has_value();
    g.contracts_.push_back({r.contract_id, e, class_index.at(r.cpv.class2()), r.single_bid, has_bids});
    g.eligible_.push_back(has_bids ? 1 : 0);
    if (has_bids) ++g.n_eligible_;
  }

  const auto n = g.n_nodes();
  g.incident_offsets_.assign(n + 1, 0);
  g.strength_.assign(n, 0);
  for (const auto& edge : g.edges_) {
    ++g.incident_offsets_[edge.issuer + 1];
    ++g.incident_offsets_[edge.winner + 1];
    g.strength_[edge.issuer] += edge.stats.weight;
    g.strength_[edge.winner] += edge.stats.weight;
  }
  std::partial_sum(g.incident_offsets_.begin(), g.incident_offsets_.end(), g.incident_offsets_.begin());
  g.incident_.resize(2 * g.edges_.size());
  std::vector<std::size_t> cursor(g.incident_offsets_.begin(), g.incident_offsets_.end() - 1);
  for (EdgeIndex e = 0; e < g.edges_.size(); ++e) {
    g.incident_[cursor[g.edges_[e].issuer]++] = e;
    g.incident_[cursor[g.edges_[e].winner]++] = e;
  }
  return g;
}

NodeIndex MarketGraph::find_node(Role role, std::string_view id) const {
  const auto first = node_ids_.begin() + (role == Role::Issuer ? 0 : static_cast<std::ptrdiff_t>(n_issuers_));
  const auto last = role == Role::Issuer ? node_ids_.begin() + static_cast<std::ptrdiff_t>(n_issuers_) : node_ids_.end();
  auto it = std::lower_bound(first, last, id, [](const std::string& a, std::string_view b) { return a < b; });
  if (it == last || *it != id) return static_cast<NodeIndex>(n_nodes());
  return static_cast<NodeIndex>(it - node_ids_.begin());
}

std::vector<std::uint8_t> MarketGraph::single_bid_flags() const {
  std::vector<std::uint8_t> flags(contracts_.size());
  for (std::size_t i = 0; i < contracts_.size(); ++i) flags[i] = contracts_[i].single_bid ? 1 : 0;
  return flags;
}

void write_edge_list_csv(std::ostream& out, const MarketGraph& graph) {
  csv::write_row(out, {"issuer_id", "winner_id", "weight", "single_bid_count"});
  for (const auto& e : graph.edges()) {
    csv::write_row(out, {graph.node_id(e.issuer), graph.node_id(e.winner), std::to_string(e.stats.weight),
                         std::to_string(e.stats.single_bid_count)});
  }
}

}  // namespace procnet
