#include "procnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "procnet/errors.hpp"
#include "procnet/louvain.hpp"

namespace procnet {

std::vector<std::pair<MarketKey, ContractTable>> split_markets(const ContractTable& table, bool pooled) {
  std::map<MarketKey, ContractTable> groups;
  if (pooled) {
    std::map<std::string, std::pair<int, int>> span;
    for (const auto& r : table.records) {
      auto [it, inserted] = span.try_emplace(r.country, r.year, r.year);
      it->second.first = std::min(it->second.first, r.year);
      it->second.second = std::max(it->second.second, r.year);
    }
    for (const auto& r : table.records) {
      const auto& [lo, hi] = span.at(r.country);
      const auto period = lo == hi ? std::to_string(lo) : std::to_string(lo) + ":" + std::to_string(hi);
      groups[{r.country, period}].records.push_back(r);
    }
  } else {
    for (const auto& r : table.records) groups[{r.country, std::to_string(r.year)}].records.push_back(r);
  }
  std::vector<std::pair<MarketKey, ContractTable>> out;
  out.reserve(groups.size());
  for (auto& [key, t] : groups) {
    t.provenance.source = table.provenance.source;
    t.provenance.rows_read = t.records.size();
    out.emplace_back(key, std::move(t));
  }
  return out;
}

CommunityRun detect_communities(const MarketGraph& graph, std::uint64_t seed, std::size_t runs,
                                const LineGraphOptions& options) {
  const auto lg = build_line_graph(graph, options);
  CommunityRun run;
  run.partition = louvain(lg, seed);
  std::vector<double> q{run.partition.modularity};
  for (std::size_t k = 1; k < runs; ++k) q.push_back(louvain(lg, derive_seed(seed, k)).modularity);
  double sum = 0;
  for (double v : q) sum += v;
  run.modularity_mean = sum / static_cast<double>(q.size());
  double ss = 0;
  for (double v : q) ss += (v - run.modularity_mean) * (v - run.modularity_mean);
  run.modularity_std = std::sqrt(ss / static_cast<double>(q.size()));
  return run;
}

NullModelResult run_core_null(const MarketGraph& graph, const CorePartition& partition, const NullOptions& options) {
  // Core contracts with bid data; the statistic only reads these positions.
  auto members = std::make_shared<std::vector<std::uint32_t>>();
  for (const auto& e : graph.edges()) {
    if (!partition.is_core[e.issuer] || !partition.is_core[e.winner]) continue;
    for (auto c : e.stats.contracts) {
      if (graph.contracts()[c].has_bids) members->push_back(c);
    }
  }
  ContractStatistic stat = [members](FlagSpan flags) -> std::optional<double> {
    if (members->empty()) return std::nullopt;
    std::int64_t single = 0;
    for (auto c : *members) single += flags[c];
    return static_cast<double>(single) / static_cast<double>(members->size());
  };
  return null_distribution("core_sb", stat, graph, options);
}

NullModelResult run_cv_null(const MarketGraph& graph, const EdgePartition& partition, const NullOptions& options) {
  auto evaluator = std::make_shared<ClusteringEvaluator>(graph, partition);
  ContractStatistic stat = [evaluator](FlagSpan flags) { return evaluator->cv(flags); };
  return null_distribution("cv", stat, graph, options);
}

MarketAnalysis analyze_market(const MarketKey& key, const MarketGraph& graph, const AnalysisOptions& options) {
  MarketAnalysis a;
  a.key = key;
  a.stats = market_stats(graph);
  a.core_partition = core_membership(graph, weighted_core_numbers(graph), options.threshold);
  a.core = core_stats(graph, a.core_partition);

  NullOptions null_options;
  null_options.n_reps = options.n_reps;
  null_options.seed = options.seed;
  null_options.threads = options.threads;

  if (options.communities) {
    try {
      auto run = detect_communities(graph, options.seed, std::max<std::size_t>(1, options.louvain_runs), options.line_graph);
      a.modularity_mean = run.modularity_mean;
      a.modularity_std = run.modularity_std;
      a.clustering = sb_clustering_cv(graph, run.partition);
      a.partition = std::move(run.partition);
      if (!a.clustering->cv) a.notes.push_back("cv: not evaluable (fewer than two clusters or no single bids)");
    } catch (const DataError& e) {
      a.notes.push_back(std::string("communities: ") + e.what());
    }
  }

  if (options.null_model) {
    if (!a.core.core_single_bidding_rate) {
      a.notes.push_back("core_sb null: core has no contracts with bid data");
    } else {
      try {
        a.core_null = run_core_null(graph, a.core_partition, null_options);
      } catch (const DataError& e) {
        a.notes.push_back(std::string("core_sb null: ") + e.what());
      }
    }
    if (a.partition && a.clustering && a.clustering->cv) {
      try {
        a.cv_null = run_cv_null(graph, *a.partition, null_options);
      } catch (const DataError& e) {
        a.notes.push_back(std::string("cv null: ") + e.what());
      }
    }
  }
  return a;
}

}  // namespace procnet
