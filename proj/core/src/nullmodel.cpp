#include "procnet/nullmodel.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "procnet/csv.hpp"
#include "procnet/errors.hpp"

namespace procnet {

CpvShuffler::CpvShuffler(const MarketGraph& graph) : members_(graph.cpv_classes().size()) {
  const auto contracts = graph.contracts();
  for (std::uint32_t i = 0; i < contracts.size(); ++i) {
    if (contracts[i].has_bids) members_[contracts[i].cpv_class].push_back(i);
  }
}

void CpvShuffler::shuffle(std::span<std::uint8_t> flags, Rng& rng) const {
  std::vector<std::uint8_t> scratch;
  for (const auto& members : members_) {
    if (members.size() < 2) continue;
    scratch.resize(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) scratch[k] = flags[members[k]];
    fisher_yates(std::span<std::uint8_t>(scratch), rng);
    for (std::size_t k = 0; k < members.size(); ++k) flags[members[k]] = scratch[k];
  }
}

std::vector<std::uint8_t> replicate_flags(const CpvShuffler& shuffler, FlagSpan observed, std::uint64_t seed,
                                          std::size_t index) {
  std::vector<std::uint8_t> flags(observed.begin(), observed.end());
  Rng rng(derive_seed(seed, index));
  shuffler.shuffle(flags, rng);
  return flags;
}

std::pair<std::optional<double>, std::optional<double>> relative_score(double observed, double null_mean,
                                                                       std::optional<double> null_std) {
  std::pair<std::optional<double>, std::optional<double>> out;
  if (null_mean != 0.0) out.first = observed / null_mean;
  if (null_std && *null_std != 0.0) out.second = (observed - null_mean) / *null_std;
  return out;
}

NullModelResult null_distribution(std::string name, const ContractStatistic& statistic, const MarketGraph& graph,
                                  const NullOptions& options) {
  if (options.n_reps == 0) throw DataError("null model needs at least one replicate");
  const auto observed_flags = graph.single_bid_flags();
  const auto observed = statistic(observed_flags);
  if (!observed) throw DataError("statistic '" + name + "' is undefined on the observed labels");

  const CpvShuffler shuffler(graph);
  std::vector<std::optional<double>> values(options.n_reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<std::uint8_t> flags;
    for (std::size_t i = next++; i < options.n_reps; i = next++) {
      flags.assign(observed_flags.begin(), observed_flags.end());
      Rng rng(derive_seed(options.seed, i));
      shuffler.shuffle(flags, rng);
      values[i] = statistic(flags);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(options.n_reps)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  NullModelResult r;
  r.statistic = std::move(name);
  r.observed = *observed;
  r.n_reps = options.n_reps;
  r.seed = options.seed;

  // Moments in replicate order, shifted by the first valid value: identical
  // replicates give an exact mean and zero spread.
  std::optional<double> pivot;
  double sum = 0.0;
  std::size_t n_valid = 0;
  for (const auto& v : values) {
    if (!v) {
      ++r.n_missing;
      continue;
    }
    if (!pivot) pivot = *v;
    sum += *v - *pivot;
    ++n_valid;
  }
  if (n_valid == 0) throw DataError("statistic '" + r.statistic + "' is undefined on every replicate");
  r.null_mean = *pivot + sum / static_cast<double>(n_valid);
  if (n_valid >= 2) {
    double ss = 0.0;
    for (const auto& v : values) {
      if (v) ss += (*v - r.null_mean) * (*v - r.null_mean);
    }
    r.null_std = std::sqrt(ss / static_cast<double>(n_valid - 1));
  }
  std::tie(r.ratio, r.z) = relative_score(r.observed, r.null_mean, r.null_std);
  if (options.keep_samples) r.samples = std::move(values);
  return r;
}

ContractStatistic global_sb_rate_statistic(const MarketGraph& graph) {
  const auto& eligible = graph.risk_eligible();
  const auto n = graph.n_risk_eligible();
  return [&eligible, n](FlagSpan flags) -> std::optional<double> {
    if (n == 0) return std::nullopt;
    std::int64_t single = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) single += eligible[i] & flags[i];
    return static_cast<double>(single) / static_cast<double>(n);
  };
}

std::string to_json(const NullModelResult& r) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (v && std::isfinite(*v)) return *v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["statistic"] = r.statistic;
  j["observed"] = r.observed;
  j["null_mean"] = r.null_mean;
  j["null_std"] = opt(r.null_std);
  j["ratio"] = opt(r.ratio);
  j["z"] = opt(r.z);
  j["n_reps"] = r.n_reps;
  j["n_missing"] = r.n_missing;
  j["seed"] = r.seed;
  return j.dump();
}

void write_samples_csv(std::ostream& out, const NullModelResult& result) {
  csv::write_row(out, {"replicate", "value"});
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    csv::write_row(out, {std::to_string(i), csv::format_optional(result.samples[i])});
  }
}

}  // namespace procnet
