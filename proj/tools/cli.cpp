#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <openssl/evp.h>

#include "procnet/analysis.hpp"
#include "procnet/core.hpp"
#include "procnet/csv.hpp"
#include "procnet/errors.hpp"
#include "procnet/ingest.hpp"
#include "procnet/louvain.hpp"
#include "procnet/market_stats.hpp"
#include "procnet/nullmodel.hpp"
#include "procnet/report.hpp"
#include "procnet/risk.hpp"
#include "procnet/synth.hpp"

namespace procnet::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw DataError("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_all(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_tag(const MarketKey& key) {
  std::string period = key.period;
  std::replace(period.begin(), period.end(), ':', '-');
  return key.country + "_" + period;
}

// Options shared by the commands that read a contract file.
struct InputOptions {
  std::string input = "-";
  std::string config;
  std::string country;
  std::string years;
  bool keep_missing_bids = false;
  bool pooled = false;

  void add_to(CLI::App& sub) {
    sub.add_option("--input,-i", input, "Contract CSV, '-' for stdin")->capture_default_str();
    sub.add_option("--config", config, "Key-value file with column mapping (column.<name> = header), delimiter, country");
    sub.add_option("--country", country, "Keep only this country code");
    sub.add_option("--years", years, "Keep only years FIRST:LAST (or a single year)");
    sub.add_flag("--keep-missing-bids", keep_missing_bids,
                 "Keep contracts without a bid count in the graph (they never enter risk statistics)");
    sub.add_flag("--pooled", pooled, "Pool all years of a country into one market instead of one market per year");
  }
};

struct OutputOptions {
  std::string out;
  bool record_time = false;

  void add_to(CLI::App& sub, bool required = false) {
    auto* opt = sub.add_option("--out,-o", out, "Output directory (receives manifest.json); stdout when omitted");
    if (required) opt->required();
    sub.add_flag("--record-time", record_time, "Record wall-clock start/finish times in the manifest");
  }
  bool to_dir() const { return !out.empty(); }
};

// Collects what a command read and wrote, then writes the manifest.
class Run {
 public:
  Run(const CLI::App& sub, const OutputOptions& output, std::vector<std::string> argv)
      : sub_(sub), output_(output) {
    manifest_.command = sub.get_name();
    manifest_.arguments = std::move(argv);
    if (output.record_time) manifest_.started_at = utc_now();
    if (output.to_dir()) {
      try {
        fs::create_directories(output.out);
      } catch (const fs::filesystem_error& e) {
        throw DataError("cannot create output directory " + output.out + ": " + e.what());
      }
    }
  }

  RunManifest& manifest() { return manifest_; }

  std::string read_input(const std::string& path) {
    auto text = read_all(path);
    manifest_.input_hashes[path == "-" ? "<stdin>" : path] = sha256_hex(text);
    return text;
  }

  /// Writes `name` into the output directory, or to stdout when `primary`
  /// and no directory was given.
  void emit(const std::string& name, bool primary, const std::function<void(std::ostream&)>& body) {
    if (!output_.to_dir()) {
      if (primary) body(std::cout);
      return;
    }
    const auto path = fs::path(output_.out) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    body(out);
    if (!out) throw DataError("error while writing " + path.string());
    manifest_.outputs.push_back(name);
  }

  void finish() {
    if (!output_.to_dir()) return;
    collect_parameters();
    if (output_.record_time) manifest_.finished_at = utc_now();
    write_manifest(output_.out, manifest_);
  }

  void collect_parameters() {
    for (const auto* opt : sub_.get_options()) {
      if (opt->count() == 0 || opt->get_name() == "--help") continue;
      std::string joined;
      for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
      manifest_.parameters[opt->get_name()] = opt->get_type_size() == 0 && joined.empty() ? "true" : joined;
    }
  }

 private:
  const CLI::App& sub_;
  const OutputOptions& output_;
  RunManifest manifest_;
};

FormatConfig format_from(const InputOptions& in, KeyValueConfig* loaded = nullptr) {
  if (in.config.empty()) return {};
  auto config = KeyValueConfig::load(in.config);
  if (loaded) *loaded = config;
  return FormatConfig::from_config(config);
}

ContractTable load_contracts(Run& run, const InputOptions& in) {
  const auto format = format_from(in);
  if (!in.config.empty()) run.manifest().config_path = in.config;
  const auto text = run.read_input(in.input);
  auto table = parse_contracts(text, in.input == "-" ? "<stdin>" : in.input, format);
  if (!table.provenance.rejected.empty()) {
    std::cerr << "warning: " << table.provenance.rejected.size() << " of " << table.provenance.rows_read
              << " rows rejected (first: line " << table.provenance.rejected.front().line << ", "
              << table.provenance.rejected.front().reason << ")\n";
  }
  ContractFilter filter;
  if (!in.country.empty()) filter.country = in.country;
  if (!in.years.empty()) filter.years = YearRange::parse(in.years);
  filter.require_bids = !in.keep_missing_bids;
  auto filtered = filter_contracts(table, filter);
  if (filtered.empty()) std::cerr << "warning: no contracts left after filtering\n";
  return filtered;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t seed = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw UsageError("--seed must be a non-negative integer");
  return seed;
}

IndicatorSeries parse_indicator_spec(const std::string& spec) {
  // NAME[@YEAR]:POLARITY:PATH
  const auto a = spec.find(':');
  const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
  if (b == std::string::npos) throw UsageError("--indicator expects NAME[@YEAR]:POLARITY:PATH, got '" + spec + "'");
  auto name = spec.substr(0, a);
  int year = 0;
  if (auto at = name.find('@'); at != std::string::npos) {
    year = std::stoi(name.substr(at + 1));
    name = name.substr(0, at);
  }
  return IndicatorSeries::load(spec.substr(b + 1), name, parse_polarity(spec.substr(a + 1, b - a - 1)), year);
}

CoreThreshold parse_threshold(const std::string& text) {
  if (text == "strength") return CoreThreshold::MeanStrength;
  if (text == "degree") return CoreThreshold::MeanDegree;
  throw UsageError("--threshold must be strength or degree");
}

std::string period_of(const MarketKey& key) { return key.period; }

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"procnet: corruption-risk analysis of public procurement markets as bipartite networks"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "procnet 0.1.0");
  std::vector<std::string> raw_args(argv + 1, argv + argc);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Parse, deduplicate and filter contract records");
  InputOptions ingest_in;
  OutputOptions ingest_out;
  bool no_dedup = false;
  ingest_in.add_to(*ingest);
  ingest_out.add_to(*ingest);
  ingest->add_flag("--no-dedup", no_dedup, "Keep raw entity names as ids");

  // stats
  auto* stats = app.add_subcommand("stats", "Descriptive market statistics, one row per market");
  InputOptions stats_in;
  OutputOptions stats_out;
  bool unscaled_ra = false;
  stats_in.add_to(*stats);
  stats_out.add_to(*stats);
  stats->add_flag("--ra-unscaled", unscaled_ra, "Report the bare 4-cycle / 3-path ratio without the factor 4");

  // core
  auto* core = app.add_subcommand("core", "Weighted core numbers, core membership and core statistics");
  InputOptions core_in;
  OutputOptions core_out;
  std::string threshold = "strength";
  core_in.add_to(*core);
  core_out.add_to(*core);
  core->add_option("--threshold", threshold, "Membership threshold: class mean of strength or degree")
      ->check(CLI::IsMember({"strength", "degree"}))
      ->capture_default_str();

  // communities
  auto* comm = app.add_subcommand("communities", "Link communities via Louvain on the line graph");
  InputOptions comm_in;
  OutputOptions comm_out;
  std::string comm_seed;
  std::size_t louvain_runs = 10;
  std::uint64_t max_line_edges = 100'000'000;
  unsigned comm_threads = 1;
  comm_in.add_to(*comm);
  comm_out.add_to(*comm);
  comm->add_option("--seed", comm_seed, "Louvain seed")->required();
  comm->add_option("--louvain-runs", louvain_runs, "Seeds used for the modularity spread")->capture_default_str();
  comm->add_option("--max-line-edges", max_line_edges, "Refuse line graphs larger than this")->capture_default_str();
  comm->add_option("--threads", comm_threads, "Worker threads for line-graph construction")->capture_default_str();

  // null
  auto* null = app.add_subcommand("null", "CPV-preserving permutation null models");
  InputOptions null_in;
  OutputOptions null_out;
  std::string null_seed;
  std::string statistic = "core_sb";
  std::size_t reps = 1000;
  unsigned threads = 1;
  bool keep_samples = false;
  std::string null_threshold = "strength";
  null_in.add_to(*null);
  null_out.add_to(*null);
  null->add_option("--statistic", statistic, "Comma list of core_sb, cv, global_sb, or 'all'")->capture_default_str();
  null->add_option("--reps", reps, "Permutation replicates")->capture_default_str()->check(CLI::PositiveNumber);
  null->add_option("--seed", null_seed, "Master seed")->required();
  null->add_option("--threads", threads, "Worker threads for replicate evaluation")->capture_default_str();
  null->add_flag("--samples", keep_samples, "Write replicate values as CSV next to each result");
  null->add_option("--threshold", null_threshold, "Core membership threshold: strength or degree")
      ->check(CLI::IsMember({"strength", "degree"}))
      ->capture_default_str();

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic market with planted structure");
  OutputOptions synth_out;
  std::string synth_config;
  std::string synth_seed;
  synth_out.add_to(*synth);
  synth->add_option("--config", synth_config, "Generator key-value config");
  synth->add_option("--seed", synth_seed, "Seed (overrides the config's seed)");

  // correlate
  auto* corr = app.add_subcommand("correlate", "Correlate country risk measures with external indicators");
  InputOptions corr_in;
  OutputOptions corr_out;
  std::vector<std::string> corr_indicators;
  std::string corr_seed;
  std::size_t corr_boot = 1000;
  std::string measure = "sb_rate";
  corr_in.add_to(*corr);
  corr_out.add_to(*corr);
  corr->add_option("--indicator", corr_indicators, "NAME[@YEAR]:POLARITY:PATH, POLARITY higher_is_worse|higher_is_better")
      ->required();
  corr->add_option("--seed", corr_seed, "Bootstrap seed")->required();
  corr->add_option("--n-boot", corr_boot, "Bootstrap resamples")->capture_default_str();
  corr->add_option("--measure", measure, "Country measure: sb_rate or core_share")
      ->check(CLI::IsMember({"sb_rate", "core_share"}))
      ->capture_default_str();

  // report
  auto* report = app.add_subcommand("report", "Run the full pipeline and emit all figure-data files");
  InputOptions report_in;
  OutputOptions report_out;
  std::vector<std::string> report_indicators;
  std::string report_seed;
  std::size_t report_reps = 1000;
  std::size_t report_boot = 1000;
  std::size_t report_louvain_runs = 10;
  unsigned report_threads = 1;
  bool no_null = false, no_communities = false, contract_weighted = false;
  std::string report_threshold = "strength";
  report_in.add_to(*report);
  report_out.add_to(*report, /*required=*/true);
  report->add_option("--indicator", report_indicators, "NAME[@YEAR]:POLARITY:PATH (repeatable)");
  report->add_option("--seed", report_seed, "Master seed for Louvain, null models and bootstraps")->required();
  report->add_option("--reps", report_reps, "Permutation replicates")->capture_default_str()->check(CLI::PositiveNumber);
  report->add_option("--n-boot", report_boot, "Bootstrap resamples")->capture_default_str();
  report->add_option("--louvain-runs", report_louvain_runs, "Seeds used for the modularity spread")->capture_default_str();
  report->add_option("--threads", report_threads, "Worker threads for replicate evaluation")->capture_default_str();
  report->add_flag("--no-null", no_null, "Skip the permutation null models");
  report->add_flag("--no-communities", no_communities, "Skip link-community detection");
  report->add_flag("--contract-weighted", contract_weighted, "Weight cross-year means by contract counts");
  report->add_option("--threshold", report_threshold, "Core membership threshold: strength or degree")
      ->check(CLI::IsMember({"strength", "degree"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest) {
      Run run(*ingest, ingest_out, raw_args);
      KeyValueConfig config;
      const auto format = format_from(ingest_in, &config);
      if (!ingest_in.config.empty()) run.manifest().config_path = ingest_in.config;
      NormalizeOptions normalize;
      if (auto suffixes = config.get("legal_suffixes")) normalize.legal_suffixes = split_list(*suffixes);

      const auto text = run.read_input(ingest_in.input);
      auto table = parse_contracts(text, ingest_in.input == "-" ? "<stdin>" : ingest_in.input, format);
      std::vector<std::pair<std::string, RejectedRow>> rejected;
      for (const auto& r : table.provenance.rejected) rejected.emplace_back("parse", r);

      DedupResult dedup;
      if (!no_dedup) {
        dedup = deduplicate_entities(table, normalize);
        for (const auto& r : dedup.rejected) rejected.emplace_back("dedup", r);
        table = std::move(dedup.table);
      }
      ContractFilter filter;
      if (!ingest_in.country.empty()) filter.country = ingest_in.country;
      if (!ingest_in.years.empty()) filter.years = YearRange::parse(ingest_in.years);
      filter.require_bids = !ingest_in.keep_missing_bids;
      const auto filtered = filter_contracts(table, filter);
      if (filtered.empty()) std::cerr << "warning: no contracts left after filtering\n";

      std::cerr << "ingest: " << table.provenance.rows_read << " rows read, " << rejected.size() << " rejected, "
                << filtered.size() << " contracts kept";
      if (!no_dedup) {
        std::cerr << "; issuers " << dedup.issuers_before << " -> " << dedup.issuers_after << ", winners "
                  << dedup.winners_before << " -> " << dedup.winners_after;
      }
      std::cerr << "\n";

      auto& params = run.manifest().parameters;
      params["summary.rows_read"] = std::to_string(table.provenance.rows_read);
      params["summary.rows_rejected"] = std::to_string(rejected.size());
      params["summary.contracts_kept"] = std::to_string(filtered.size());
      if (!no_dedup) {
        params["summary.issuers_before"] = std::to_string(dedup.issuers_before);
        params["summary.issuers_after"] = std::to_string(dedup.issuers_after);
        params["summary.winners_before"] = std::to_string(dedup.winners_before);
        params["summary.winners_after"] = std::to_string(dedup.winners_after);
      }

      run.emit("contracts.csv", true, [&](std::ostream& out) { write_contracts_csv(out, filtered); });
      if (!no_dedup) run.emit("entity_map.csv", false, [&](std::ostream& out) { write_entity_mapping_csv(out, dedup.mapping); });
      run.emit("rejected.csv", false, [&](std::ostream& out) {
        csv::write_row(out, {"stage", "line", "reason"});
        for (const auto& [stage, r] : rejected) csv::write_row(out, {stage, std::to_string(r.line), r.reason});
      });
      run.finish();
      return kExitOk;
    }

    if (*stats) {
      Run run(*stats, stats_out, raw_args);
      const auto table = load_contracts(run, stats_in);
      std::ostringstream body;
      write_stats_header(body);
      for (const auto& [key, group] : split_markets(table, stats_in.pooled)) {
        const auto graph = MarketGraph::build(group);
        auto s = market_stats(graph);
        if (unscaled_ra) s.ra_clustering = robins_alexander_clustering(graph, false);
        write_stats_row(body, key.country, period_of(key), s);
      }
      if (table.empty()) throw DataError("empty market");
      run.manifest().parameters["std_normalization"] = "population";
      run.emit("stats.csv", true, [&](std::ostream& out) { out << body.str(); });
      run.finish();
      return kExitOk;
    }

    if (*core) {
      Run run(*core, core_out, raw_args);
      const auto table = load_contracts(run, core_in);
      if (table.empty()) throw DataError("empty market");
      std::ostringstream summary;
      csv::write_row(summary, {"country", "period", "core_contracts", "core_share", "core_n_winners", "core_n_issuers",
                               "core_n_edges", "core_sb_rate", "issuer_threshold", "winner_threshold"});
      for (const auto& [key, group] : split_markets(table, core_in.pooled)) {
        const auto graph = MarketGraph::build(group);
        const auto partition = core_membership(graph, weighted_core_numbers(graph), parse_threshold(threshold));
        const auto s = core_stats(graph, partition);
        csv::write_row(summary, {key.country, key.period, std::to_string(s.core_contracts), csv::format_double(s.core_share),
                                 std::to_string(s.core_n_winners), std::to_string(s.core_n_issuers),
                                 std::to_string(s.core_n_edges), csv::format_optional(s.core_single_bidding_rate),
                                 csv::format_double(partition.issuer_threshold),
                                 csv::format_double(partition.winner_threshold)});
        run.emit("core_nodes_" + file_tag(key) + ".csv", false,
                 [&](std::ostream& out) { write_core_csv(out, graph, partition); });
      }
      run.emit("core_stats.csv", true, [&](std::ostream& out) { out << summary.str(); });
      run.finish();
      return kExitOk;
    }

    if (*comm) {
      Run run(*comm, comm_out, raw_args);
      const auto seed = parse_seed(comm_seed);
      run.manifest().master_seed = seed;
      const auto table = load_contracts(run, comm_in);
      if (table.empty()) throw DataError("empty market");
      LineGraphOptions lg_options{max_line_edges, std::max(1u, comm_threads)};
      std::ostringstream summary;
      csv::write_row(summary, {"country", "period", "n_edges", "n_communities", "modularity", "modularity_mean",
                               "modularity_std", "mu_w", "sigma_w", "cv"});
      for (const auto& [key, group] : split_markets(table, comm_in.pooled)) {
        const auto graph = MarketGraph::build(group);
        const auto found = detect_communities(graph, seed, std::max<std::size_t>(1, louvain_runs), lg_options);
        const auto risk = sb_clustering_cv(graph, found.partition);
        csv::write_row(summary, {key.country, key.period, std::to_string(graph.n_edges()),
                                 std::to_string(found.partition.n_communities), csv::format_double(found.partition.modularity),
                                 csv::format_double(found.modularity_mean), csv::format_double(found.modularity_std),
                                 csv::format_double(risk.mu_w), csv::format_optional(risk.sigma_w), csv::format_optional(risk.cv)});
        run.emit("partition_" + file_tag(key) + ".csv", false,
                 [&](std::ostream& out) { write_partition_csv(out, graph, found.partition); });
        run.emit("clusters_" + file_tag(key) + ".csv", false,
                 [&](std::ostream& out) { write_cluster_summary_csv(out, risk); });
      }
      run.emit("communities.csv", true, [&](std::ostream& out) { out << summary.str(); });
      run.finish();
      return kExitOk;
    }

    if (*null) {
      Run run(*null, null_out, raw_args);
      const auto seed = parse_seed(null_seed);
      run.manifest().master_seed = seed;
      run.manifest().n_reps = reps;
      std::vector<std::string> wanted = statistic == "all" ? std::vector<std::string>{"core_sb", "cv", "global_sb"}
                                                           : split_list(statistic);
      for (const auto& s : wanted) {
        if (s != "core_sb" && s != "cv" && s != "global_sb") throw UsageError("unknown statistic '" + s + "'");
      }
      if (wanted.empty()) throw UsageError("--statistic is empty");
      const auto table = load_contracts(run, null_in);
      if (table.empty()) throw DataError("empty market");

      NullOptions options;
      options.n_reps = reps;
      options.seed = seed;
      options.threads = std::max(1u, threads);
      options.keep_samples = keep_samples;
      std::size_t evaluated = 0, failed = 0;
      for (const auto& [key, group] : split_markets(table, null_in.pooled)) {
        const auto graph = MarketGraph::build(group);
        for (const auto& s : wanted) {
          const auto name = "null_" + s + "_" + file_tag(key);
          NullModelResult result;
          try {
            if (s == "global_sb") {
              result = null_distribution("global_sb", global_sb_rate_statistic(graph), graph, options);
            } else if (s == "core_sb") {
              const auto partition =
                  core_membership(graph, weighted_core_numbers(graph), parse_threshold(null_threshold));
              result = run_core_null(graph, partition, options);
            } else {
              const auto found = detect_communities(graph, seed, 1);
              result = run_cv_null(graph, found.partition, options);
            }
          } catch (const DataError& e) {
            // One unevaluable market should not abort the others.
            std::cerr << "warning: " << key.country << " " << key.period << ": " << e.what() << "\n";
            run.manifest().omitted[name + ".json"] = e.what();
            ++failed;
            continue;
          }
          ++evaluated;
          run.emit(name + ".json", true, [&](std::ostream& out) { out << to_json(result) << '\n'; });
          if (keep_samples) {
            run.emit(name + "_samples.csv", false, [&](std::ostream& out) { write_samples_csv(out, result); });
          }
        }
      }
      run.finish();
      if (evaluated == 0 && failed > 0) throw DataError("no statistic was evaluable on the observed data");
      return kExitOk;
    }

    if (*synth) {
      Run run(*synth, synth_out, raw_args);
      KeyValueConfig config;
      if (!synth_config.empty()) {
        config = KeyValueConfig::load(synth_config);
        run.read_input(synth_config);
        run.manifest().config_path = synth_config;
      }
      if (!synth_seed.empty()) config.set("seed", std::to_string(parse_seed(synth_seed)));
      if (!config.contains("seed")) throw UsageError("synth needs a seed: pass --seed or set seed in the config");
      const auto synth_cfg = SynthConfig::from_config(config);
      run.manifest().master_seed = synth_cfg.seed;
      const auto market = generate_market(synth_cfg);
      run.emit("contracts.csv", true, [&](std::ostream& out) { write_contracts_csv(out, market.table); });
      run.finish();
      return kExitOk;
    }

    if (*corr) {
      Run run(*corr, corr_out, raw_args);
      const auto seed = parse_seed(corr_seed);
      run.manifest().master_seed = seed;
      std::vector<IndicatorSeries> indicators;
      for (const auto& spec : corr_indicators) {
        indicators.push_back(parse_indicator_spec(spec));
        run.read_input(spec.substr(spec.find(':', spec.find(':') + 1) + 1));
      }
      const auto table = load_contracts(run, corr_in);
      if (table.empty()) throw DataError("empty market");

      std::map<std::string, double> values;
      if (measure == "sb_rate") {
        std::map<std::string, ContractTable> by_country;
        for (const auto& r : table.records) by_country[r.country].records.push_back(r);
        for (const auto& [country, t] : by_country) {
          if (auto rate = country_sb_rate(t)) values[country] = *rate;
        }
      } else {
        AnalysisOptions options;
        options.communities = false;
        options.null_model = false;
        std::vector<MarketAnalysis> markets;
        for (const auto& [key, group] : split_markets(table, corr_in.pooled)) {
          markets.push_back(analyze_market(key, MarketGraph::build(group), options));
        }
        for (const auto& s : summarize_countries(markets)) {
          if (s.core_share) values[s.country] = *s.core_share;
        }
      }

      std::ostringstream body;
      csv::write_row(body, {"measure", "indicator", "indicator_year", "polarity", "expected_sign", "n", "r", "ci_low",
                            "ci_high", "n_boot", "sign_matches_polarity"});
      for (std::size_t k = 0; k < indicators.size(); ++k) {
        const auto& ind = indicators[k];
        const auto joined = join_with_indicator(values, ind);
        const auto c = pearson_with_bootstrap(joined.x, joined.y, corr_boot, derive_seed(seed, k));
        csv::write_row(body, {measure, ind.name, ind.year ? std::to_string(ind.year) : "NA",
                              std::string(to_string(ind.polarity)), std::to_string(expected_sign(ind.polarity)),
                              std::to_string(c.n), csv::format_double(c.r), csv::format_double(c.ci_low),
                              csv::format_double(c.ci_high), std::to_string(c.n_boot),
                              c.r * expected_sign(ind.polarity) > 0 ? "1" : "0"});
      }
      run.emit("correlations.csv", true, [&](std::ostream& out) { out << body.str(); });
      run.finish();
      return kExitOk;
    }

    if (*report) {
      Run run(*report, report_out, raw_args);
      const auto seed = parse_seed(report_seed);
      run.manifest().master_seed = seed;
      if (!no_null) run.manifest().n_reps = report_reps;
      ReportInputs inputs;
      for (const auto& spec : report_indicators) {
        inputs.indicators.push_back(parse_indicator_spec(spec));
        run.read_input(spec.substr(spec.find(':', spec.find(':') + 1) + 1));
      }
      const auto table = load_contracts(run, report_in);
      if (table.empty()) throw DataError("empty market");

      AnalysisOptions options;
      options.threshold = parse_threshold(report_threshold);
      options.communities = !no_communities;
      options.null_model = !no_null;
      options.n_reps = report_reps;
      options.seed = seed;
      options.threads = std::max(1u, report_threads);
      options.louvain_runs = std::max<std::size_t>(1, report_louvain_runs);
      for (const auto& [key, group] : split_markets(table, report_in.pooled)) {
        inputs.markets.push_back(analyze_market(key, MarketGraph::build(group), options));
      }
      ReportOptions ropts;
      ropts.contract_weighted = contract_weighted;
      ropts.n_boot = report_boot;
      ropts.seed = seed;
      ropts.null_model = !no_null;
      ropts.communities = !no_communities;

      run.collect_parameters();
      auto manifest = run.manifest();
      if (report_out.record_time) manifest.finished_at = utc_now();
      emit_report(inputs, ropts, report_out.out, std::move(manifest));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace procnet::cli
