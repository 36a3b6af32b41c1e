#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procnet/analysis.hpp"
#include "procnet/correlation.hpp"
#include "procnet/ingest.hpp"

namespace procnet {

inline constexpr int kManifestSchemaVersion = 1;

/// Share of single-bid contracts among records with a bid count.
std::optional<double> country_sb_rate(const ContractTable& table);

/// Everything needed to replay a run.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::string config_path;
  std::map<std::string, std::string> input_hashes;  // path -> sha256
  std::optional<std::uint64_t> master_seed;
  std::optional<std::size_t> n_reps;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> omitted;  // file -> reason
  std::optional<std::string> started_at;  // only with --record-time
  std::optional<std::string> finished_at;
};

std::map<std::string, std::string> module_versions();

/// Writes <dir>/manifest.json with sorted keys.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

/// Per-country means of the per-market values. Means skip undefined values;
/// `contract_weighted` weights each market by its contract count instead.
struct CountrySummary {
  std::string country;
  std::int64_t n_contracts = 0;  // pooled over all periods
  std::int64_t n_single_bid = 0;
  std::optional<double> sb_rate;  // pooled
  std::size_t n_periods = 0;
  std::optional<double> core_share;
  std::optional<double> core_sb_rate;
  std::optional<double> core_ratio;
  std::optional<double> core_z;
  std::optional<double> modularity;
  std::optional<double> modularity_seed_std;
  std::optional<double> cv;
  std::optional<double> cv_ratio;
  std::optional<double> cv_z;
};

std::vector<CountrySummary> summarize_countries(const std::vector<MarketAnalysis>& markets,
                                                bool contract_weighted = false);

struct ReportOptions {
  bool contract_weighted = false;
  std::size_t n_boot = 1000;
  std::uint64_t seed = 0;
  bool null_model = true;
  bool communities = true;
};

struct ReportInputs {
  std::vector<MarketAnalysis> markets;
  std::vector<IndicatorSeries> indicators;
};

/// Writes the figure-data CSVs into `dir`, records them (and anything
/// omitted) in `manifest`, then writes the manifest. Throws DataError when the
/// directory cannot be created or written.
void emit_report(const ReportInputs& inputs, const ReportOptions& options, const std::filesystem::path& dir,
                 RunManifest manifest);

/// Per-market details: one row per (country, period).
void write_markets_csv(std::ostream& out, const std::vector<MarketAnalysis>& markets);

/// Join of per-country values with an indicator, ordered by country.
struct JoinedSeries {
  std::vector<std::string> countries;
  std::vector<double> x;
  std::vector<double> y;
};
JoinedSeries join_with_indicator(const std::map<std::string, double>& measure, const IndicatorSeries& indicator);

}  // namespace procnet
