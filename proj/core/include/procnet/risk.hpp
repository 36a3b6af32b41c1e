#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "procnet/graph.hpp"
#include "procnet/louvain.hpp"

namespace procnet {

struct ClusterSummary {
  double size = 0.0;  // |c|, contract count
  double rate = 0.0;  // sb_c
};

struct WeightedMoments {
  double mean = 0.0;
  std::optional<double> std;  // undefined with fewer than two clusters
};

/// Size-weighted mean and standard deviation of single-bid rates:
///   mean = sum |c| sb_c / sum |c|
///   std  = sqrt( sum |c| (sb_c - mean)^2 / ( ((|C|-1)/|C|) * sum |c| ) )
/// Clusters of size zero are ignored.
WeightedMoments weighted_sb_moments(std::span<const ClusterSummary> clusters);

struct RiskClusteringResult {
  double mu_w = 0.0;
  std::optional<double> sigma_w;
  std::optional<double> cv;  // sigma_w / mu_w
  std::vector<std::int64_t> cluster_sizes;  // eligible contracts per community
  std::vector<std::optional<double>> cluster_sb;
};

/// Evaluates the clustering of single bidding for any labelling of the
/// market's contracts. Each contract belongs to its edge's community.
class ClusteringEvaluator {
 public:
  ClusteringEvaluator(const MarketGraph& graph, const EdgePartition& partition);

  RiskClusteringResult evaluate(std::span<const std::uint8_t> flags) const;
  /// Only the coefficient of variation; allocation-free apart from scratch.
  std::optional<double> cv(std::span<const std::uint8_t> flags) const;

 private:
  std::vector<std::uint32_t> contract_community_;
  std::vector<std::uint8_t> eligible_;
  std::vector<std::int64_t> sizes_;
  std::size_t n_communities_ = 0;
};

RiskClusteringResult sb_clustering_cv(const MarketGraph& graph, const EdgePartition& partition);

/// CSV community,n_contracts,sb_rate.
void write_cluster_summary_csv(std::ostream& out, const RiskClusteringResult& result);

}  // namespace procnet
