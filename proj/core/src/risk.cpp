#include "procnet/risk.hpp"

#include <cmath>
#include <ostream>

#include "procnet/csv.hpp"

namespace procnet {

WeightedMoments weighted_sb_moments(std::span<const ClusterSummary> clusters) {
  double total = 0.0, weighted = 0.0;
  std::size_t n = 0;
  for (const auto& c : clusters) {
    if (c.size <= 0) continue;
    total += c.size;
    weighted += c.size * c.rate;
    ++n;
  }
  WeightedMoments m;
  if (n == 0) return m;
  m.mean = weighted / total;
  if (n < 2) return m;
  double ss = 0.0;
  for (const auto& c : clusters) {
    if (c.size <= 0) continue;
    const double d = c.rate - m.mean;
    ss += c.size * d * d;
  }
  const double k = static_cast<double>(n);
  m.std = std::sqrt(ss / (((k - 1.0) / k) * total));
  return m;
}

ClusteringEvaluator::ClusteringEvaluator(const MarketGraph& graph, const EdgePartition& partition)
    : n_communities_(partition.n_communities) {
  const auto contracts = graph.contracts();
  contract_community_.resize(contracts.size());
  eligible_ = graph.risk_eligible();
  sizes_.assign(n_communities_, 0);
  for (std::size_t i = 0; i < contracts.size(); ++i) {
    const auto c = partition.community[contracts[i].edge];
    contract_community_[i] = c;
    sizes_[c] += eligible_[i];
  }
}

RiskClusteringResult ClusteringEvaluator::evaluate(std::span<const std::uint8_t> flags) const {
  RiskClusteringResult r;
  std::vector<std::int64_t> single(n_communities_, 0);
  for (std::size_t i = 0; i < contract_community_.size(); ++i) {
    if (eligible_[i]) single[contract_community_[i]] += flags[i];
  }
  r.cluster_sizes = sizes_;
  r.cluster_sb.resize(n_communities_);
  std::vector<ClusterSummary> clusters;
  clusters.reserve(n_communities_);
  for (std::size_t c = 0; c < n_communities_; ++c) {
    if (sizes_[c] == 0) continue;
    const double rate = static_cast<double>(single[c]) / static_cast<double>(sizes_[c]);
    r.cluster_sb[c] = rate;
    clusters.push_back({static_cast<double>(sizes_[c]), rate});
  }
  const auto m = weighted_sb_moments(clusters);
  r.mu_w = m.mean;
  r.sigma_w = m.std;
  if (m.std && m.mean > 0) r.cv = *m.std / m.mean;
  return r;
}

std::optional<double> ClusteringEvaluator::cv(std::span<const std::uint8_t> flags) const {
  std::vector<std::int64_t> single(n_communities_, 0);
  for (std::size_t i = 0; i < contract_community_.size(); ++i) {
    if (eligible_[i]) single[contract_community_[i]] += flags[i];
  }
  std::vector<ClusterSummary> clusters;
  clusters.reserve(n_communities_);
  for (std::size_t c = 0; c < n_communities_; ++c) {
    if (sizes_[c] == 0) continue;
    clusters.push_back({static_cast<double>(sizes_[c]), static_cast<double>(single[c]) / static_cast<double>(sizes_[c])});
  }
  const auto m = weighted_sb_moments(clusters);
  if (!m.std || m.mean <= 0) return std::nullopt;
  return *m.std / m.mean;
}

RiskClusteringResult sb_clustering_cv(const MarketGraph& graph, const EdgePartition& partition) {
  return ClusteringEvaluator(graph, partition).evaluate(graph.single_bid_flags());
}

void write_cluster_summary_csv(std::ostream& out, const RiskClusteringResult& result) {
  csv::write_row(out, {"community", "n_contracts", "sb_rate"});
  for (std::size_t c = 0; c < result.cluster_sizes.size(); ++c) {
    csv::write_row(out, {std::to_string(c), std::to_string(result.cluster_sizes[c]), csv::format_optional(result.cluster_sb[c])});
  }
}

}  // namespace procnet
