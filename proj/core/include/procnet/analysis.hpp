#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "procnet/core.hpp"
#include "procnet/ingest.hpp"
#include "procnet/line_graph.hpp"
#include "procnet/market_stats.hpp"
#include "procnet/nullmodel.hpp"
#include "procnet/risk.hpp"

namespace procnet {

/// A market is one country over one year, or over a pooled year range.
struct MarketKey {
  std::string country;
  std::string period;  // "2014" or "2008:2016"
  bool operator==(const MarketKey&) const = default;
  auto operator<=>(const MarketKey&) const = default;
};

/// Groups records by (country, year), or by country with all years pooled.
/// Output is ordered by key.
std::vector<std::pair<MarketKey, ContractTable>> split_markets(const ContractTable& table, bool pooled);

struct AnalysisOptions {
  CoreThreshold threshold = CoreThreshold::MeanStrength;
  bool communities = true;
  bool null_model = true;
  std::size_t n_reps = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// Louvain runs used to report modularity spread; the first uses `seed`.
  std::size_t louvain_runs = 10;
  LineGraphOptions line_graph;
};

struct MarketAnalysis {
  MarketKey key;
  MarketStats stats;
  CorePartition core_partition;
  CoreStats core;
  std::optional<EdgePartition> partition;
  std::optional<double> modularity_mean;  // over louvain_runs seeds
  std::optional<double> modularity_std;
  std::optional<RiskClusteringResult> clustering;
  std::optional<NullModelResult> core_null;
  std::optional<NullModelResult> cv_null;
  std::vector<std::string> notes;  // steps that could not be evaluated, and why
};

/// Statistics, core decomposition, link communities and both null models for
/// one market. Steps that are undefined for this market leave their field
/// empty and add a note instead of failing the run.
MarketAnalysis analyze_market(const MarketKey& key, const MarketGraph& graph, const AnalysisOptions& options);

/// Louvain on the market's line graph with `seed`, plus the modularity spread
/// over `runs` derived seeds.
struct CommunityRun {
  EdgePartition partition;
  double modularity_mean = 0.0;
  double modularity_std = 0.0;
};
CommunityRun detect_communities(const MarketGraph& graph, std::uint64_t seed, std::size_t runs,
                                const LineGraphOptions& options = {});

/// Null-model statistics by CLI name: "global_sb", "core_sb", "cv".
NullModelResult run_core_null(const MarketGraph& graph, const CorePartition& partition, const NullOptions& options);
NullModelResult run_cv_null(const MarketGraph& graph, const EdgePartition& partition, const NullOptions& options);

}  // namespace procnet
