#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "procnet/graph.hpp"
#include "procnet/rng.hpp"

namespace procnet {

using FlagSpan = std::span<const std::uint8_t>;

/// A contract-level statistic evaluated on a labelling of the market's
/// contracts. Must be safe to call concurrently. nullopt marks "undefined".
using ContractStatistic = std::function<std::optional<double>(FlagSpan)>;

/// Permutes single-bid labels within two-digit CPV classes. Contracts without
/// bid counts are never touched. Topology and weights are not involved.
class CpvShuffler {
 public:
  explicit CpvShuffler(const MarketGraph& graph);

  /// Fisher-Yates permutation of the labels of each class, in place.
  void shuffle(std::span<std::uint8_t> flags, Rng& rng) const;

  std::size_t n_classes() const { return members_.size(); }
  std::span<const std::uint32_t> members(std::size_t cls) const { return members_[cls]; }

 private:
  std::vector<std::vector<std::uint32_t>> members_;
};

/// Labels of replicate `index`: the observed labels permuted with a generator
/// seeded by derive_seed(seed, index).
std::vector<std::uint8_t> replicate_flags(const CpvShuffler& shuffler, FlagSpan observed,
                                          std::uint64_t seed, std::size_t index);

struct NullOptions {
  std::size_t n_reps = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool keep_samples = false;
};

struct NullModelResult {
  std::string statistic;
  double observed = 0.0;
  double null_mean = 0.0;
  std::optional<double> null_std;  // sample (n-1) std over valid replicates
  std::optional<double> ratio;
  std::optional<double> z;
  std::size_t n_reps = 0;
  std::size_t n_missing = 0;
  std::uint64_t seed = 0;
  std::vector<std::optional<double>> samples;  // in replicate order, when kept
};

/// ratio = observed / null_mean, z = (observed - null_mean) / null_std; each
/// undefined when its denominator is zero or unknown.
std::pair<std::optional<double>, std::optional<double>> relative_score(
    double observed, double null_mean, std::optional<double> null_std);

/// Runs the CPV-preserving permutation null. Replicates may run on several
/// threads; results are gathered in replicate order so the output does not
/// depend on `threads`. Throws DataError when the statistic is undefined on
/// the observed labels or on every replicate.
NullModelResult null_distribution(std::string name, const ContractStatistic& statistic,
                                  const MarketGraph& graph, const NullOptions& options);

/// Share of single-bid contracts among contracts with bid counts.
ContractStatistic global_sb_rate_statistic(const MarketGraph& graph);

/// JSON object {statistic, observed, null_mean, null_std, ratio, z, n_reps,
/// n_missing, seed}; undefined values are null.
std::string to_json(const NullModelResult& result);

/// CSV replicate,value.
void write_samples_csv(std::ostream& out, const NullModelResult& result);

}  // namespace procnet
