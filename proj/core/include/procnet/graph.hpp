#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "procnet/ingest.hpp"

namespace procnet {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

struct EdgeStats {
  std::vector<std::uint32_t> contracts;  // indices into MarketGraph::contracts()
  std::int64_t weight = 0;
  std::int64_t single_bid_count = 0;
};

struct MarketEdge {
  NodeIndex issuer = 0;
  NodeIndex winner = 0;
  EdgeStats stats;
};

/// One contract as seen by the graph: the edge it sits on and its risk label.
struct ContractRef {
  std::string contract_id;
  EdgeIndex edge = 0;
  std::uint16_t cpv_class = 0;  // index into MarketGraph::cpv_classes()
  bool single_bid = false;
  bool has_bids = true;  // false only when missing bid counts were kept
};

/// Weighted bipartite issuer-winner network. Issuers occupy node indices
/// [0, n_issuers()) and winners [n_issuers(), n_nodes()), each block sorted by
/// id; edges are sorted by (issuer, winner). Immutable once built.
class MarketGraph {
 public:
  /// Throws DataError("empty market") when the table has no records.
  static MarketGraph build(const ContractTable& table);

  std::size_t n_issuers() const { return n_issuers_; }
  std::size_t n_winners() const { return node_ids_.size() - n_issuers_; }
  std::size_t n_nodes() const { return node_ids_.size(); }
  std::size_t n_edges() const { return edges_.size(); }
  std::size_t n_contracts() const { return contracts_.size(); }

  bool is_issuer(NodeIndex v) const { return v < n_issuers_; }
  Role role(NodeIndex v) const { return is_issuer(v) ? Role::Issuer : Role::Winner; }
  const std::string& node_id(NodeIndex v) const { return node_ids_[v]; }
  /// Index of a node id within a role, or n_nodes() if absent.
  NodeIndex find_node(Role role, std::string_view id) const;

  std::span<const MarketEdge> edges() const { return edges_; }
  const MarketEdge& edge(EdgeIndex e) const { return edges_[e]; }
  std::span<const EdgeIndex> incident(NodeIndex v) const {
    return {incident_.data() + incident_offsets_[v], incident_.data() + incident_offsets_[v + 1]};
  }
  std::size_t degree(NodeIndex v) const { return incident_offsets_[v + 1] - incident_offsets_[v]; }
  /// Weighted degree: the node's contract count.
  std::int64_t strength(NodeIndex v) const { return strength_[v]; }

  std::span<const ContractRef> contracts() const { return contracts_; }
  const std::vector<std::string>& cpv_classes() const { return cpv_classes_; }

  /// Observed single-bid labels in contract order (1 = single bid).
  std::vector<std::uint8_t> single_bid_flags() const;
  /// 1 for contracts that carry a bid count and so enter risk statistics.
  const std::vector<std::uint8_t>& risk_eligible() const { return eligible_; }
  std::size_t n_risk_eligible() const { return n_eligible_; }

 private:
  std::vector<std::string> node_ids_;
  std::size_t n_issuers_ = 0;
  std::vector<MarketEdge> edges_;
  std::vector<std::size_t> incident_offsets_;
  std::vector<EdgeIndex> incident_;
  std::vector<std::int64_t> strength_;
  std::vector<ContractRef> contracts_;
  std::vector<std::string> cpv_classes_;
  std::vector<std::uint8_t> eligible_;
  std::size_t n_eligible_ = 0;
};

/// Edge list CSV: issuer_id,winner_id,weight,single_bid_count.
void write_edge_list_csv(std::ostream& out, const MarketGraph& graph);

}  // namespace procnet
