#include "procnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "procnet/csv.hpp"
#include "procnet/errors.hpp"
#include "procnet/rng.hpp"

namespace procnet {

namespace fs = std::filesystem;
using csv::format_double;
using csv::format_optional;

std::optional<double> country_sb_rate(const ContractTable& table) {
  std::int64_t eligible = 0, single = 0;
  for (const auto& r : table.records) {
    if (!r.n_bids) continue;
    ++eligible;
    single += r.single_bid ? 1 : 0;
  }
  if (eligible == 0) return std::nullopt;
  return static_cast<double>(single) / static_cast<double>(eligible);
}

std::map<std::string, std::string> module_versions() {
  const std::string v = "0.1.0";
  return {{"ingest", v}, {"graph", v}, {"core", v}, {"communities", v}, {"nullmodel", v}, {"synth", v}, {"report", v}};
}

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw DataError("error while writing " + path.string());
}

struct Mean {
  double sum = 0.0;
  double weight = 0.0;
  void add(const std::optional<double>& v, double w) {
    if (!v || !std::isfinite(*v)) return;
    sum += *v * w;
    weight += w;
  }
  std::optional<double> get() const {
    if (weight == 0) return std::nullopt;
    return sum / weight;
  }
};

std::optional<double> field(const std::optional<NullModelResult>& r, std::optional<double> NullModelResult::*member) {
  if (!r) return std::nullopt;
  return (*r).*member;
}

struct CorrelationRow {
  std::string note;
  std::optional<CorrelationResult> result;
};

CorrelationRow correlate(const std::vector<double>& x, const std::vector<double>& y, std::size_t n_boot,
                         std::uint64_t seed) {
  CorrelationRow row;
  if (x.size() < 3) {
    row.note = "fewer than 3 countries";
    return row;
  }
  try {
    row.result = pearson_with_bootstrap(x, y, n_boot, seed);
  } catch (const DataError& e) {
    row.note = e.what();
  }
  return row;
}

std::vector<std::string> correlation_fields(const CorrelationRow& row, std::size_t n) {
  if (!row.result) return {std::to_string(n), "NA", "NA", "NA", "0"};
  const auto& c = *row.result;
  return {std::to_string(c.n), format_double(c.r), format_double(c.ci_low), format_double(c.ci_high), std::to_string(c.n_boot)};
}

}  // namespace

void write_manifest(const fs::path& dir, const RunManifest& m) {
  nlohmann::json j;
  j["schema_version"] = kManifestSchemaVersion;
  j["command"] = m.command;
  j["arguments"] = m.arguments;
  j["config_path"] = m.config_path;
  j["input_hashes"] = m.input_hashes;
  j["master_seed"] = m.master_seed ? nlohmann::json(*m.master_seed) : nlohmann::json(nullptr);
  j["n_reps"] = m.n_reps ? nlohmann::json(*m.n_reps) : nlohmann::json(nullptr);
  j["parameters"] = m.parameters;
  j["module_versions"] = module_versions();
  auto outputs = m.outputs;
  std::sort(outputs.begin(), outputs.end());
  j["outputs"] = outputs;
  j["omitted"] = m.omitted;
  if (m.started_at) j["started_at"] = *m.started_at;
  if (m.finished_at) j["finished_at"] = *m.finished_at;
  write_file(dir / "manifest.json", [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

std::vector<CountrySummary> summarize_countries(const std::vector<MarketAnalysis>& markets, bool contract_weighted) {
  std::map<std::string, std::vector<const MarketAnalysis*>> by_country;
  for (const auto& m : markets) by_country[m.key.country].push_back(&m);

  std::vector<CountrySummary> out;
  for (const auto& [country, list] : by_country) {
    CountrySummary s;
    s.country = country;
    s.n_periods = list.size();
    Mean core_share, core_sb, core_ratio, core_z, modularity, modularity_std, cv, cv_ratio, cv_z;
    std::int64_t eligible = 0;
    for (const auto* m : list) {
      const double w = contract_weighted ? static_cast<double>(m->stats.n_contracts) : 1.0;
      s.n_contracts += m->stats.n_contracts;
      s.n_single_bid += m->stats.n_single_bid;
      eligible += m->stats.n_risk_eligible;
      core_share.add(m->core.core_share, w);
      core_sb.add(m->core.core_single_bidding_rate, w);
      core_ratio.add(field(m->core_null, &NullModelResult::ratio), w);
      core_z.add(field(m->core_null, &NullModelResult::z), w);
      modularity.add(m->modularity_mean, w);
      modularity_std.add(m->modularity_std, w);
      cv.add(m->clustering ? m->clustering->cv : std::nullopt, w);
      cv_ratio.add(field(m->cv_null, &NullModelResult::ratio), w);
      cv_z.add(field(m->cv_null, &NullModelResult::z), w);
    }
    if (eligible > 0) s.sb_rate = static_cast<double>(s.n_single_bid) / static_cast<double>(eligible);
    s.core_share = core_share.get();
    s.core_sb_rate = core_sb.get();
    s.core_ratio = core_ratio.get();
    s.core_z = core_z.get();
    s.modularity = modularity.get();
    s.modularity_seed_std = modularity_std.get();
    s.cv = cv.get();
    s.cv_ratio = cv_ratio.get();
    s.cv_z = cv_z.get();
    out.push_back(std::move(s));
  }
  return out;
}

JoinedSeries join_with_indicator(const std::map<std::string, double>& measure, const IndicatorSeries& indicator) {
  JoinedSeries j;
  for (const auto& [country, value] : measure) {
    auto it = indicator.values.find(country);
    if (it == indicator.values.end()) continue;
    j.countries.push_back(country);
    j.x.push_back(value);
    j.y.push_back(it->second);
  }
  return j;
}

void write_markets_csv(std::ostream& out, const std::vector<MarketAnalysis>& markets) {
  csv::write_row(out, {"country", "period", "n_contracts", "n_issuers", "n_winners", "n_edges", "density", "ra_clustering",
                       "sb_rate", "core_contracts", "core_share", "core_n_issuers", "core_n_winners", "core_n_edges",
                       "core_sb_rate", "core_null_mean", "core_ratio", "core_z", "n_communities", "modularity",
                       "modularity_seed_std", "cv", "cv_null_mean", "cv_ratio", "cv_z", "notes"});
  for (const auto& m : markets) {
    std::string notes;
    for (const auto& n : m.notes) notes += (notes.empty() ? "" : "; ") + n;
    auto null_mean = [](const std::optional<NullModelResult>& r) -> std::optional<double> {
      return r ? std::optional<double>(r->null_mean) : std::nullopt;
    };
    csv::write_row(out, {m.key.country, m.key.period, std::to_string(m.stats.n_contracts), std::to_string(m.stats.n_issuers),
                         std::to_string(m.stats.n_winners), std::to_string(m.stats.n_edges), format_double(m.stats.density),
                         format_optional(m.stats.ra_clustering), format_optional(m.stats.single_bidding_rate),
                         std::to_string(m.core.core_contracts), format_double(m.core.core_share),
                         std::to_string(m.core.core_n_issuers), std::to_string(m.core.core_n_winners),
                         std::to_string(m.core.core_n_edges), format_optional(m.core.core_single_bidding_rate),
                         format_optional(null_mean(m.core_null)), format_optional(field(m.core_null, &NullModelResult::ratio)),
                         format_optional(field(m.core_null, &NullModelResult::z)),
                         m.partition ? std::to_string(m.partition->n_communities) : "NA", format_optional(m.modularity_mean),
                         format_optional(m.modularity_std), format_optional(m.clustering ? m.clustering->cv : std::nullopt),
                         format_optional(null_mean(m.cv_null)), format_optional(field(m.cv_null, &NullModelResult::ratio)),
                         format_optional(field(m.cv_null, &NullModelResult::z)), notes});
  }
}

void emit_report(const ReportInputs& inputs, const ReportOptions& options, const fs::path& dir, RunManifest manifest) {
  try {
    fs::create_directories(dir);
  } catch (const fs::filesystem_error& e) {
    throw DataError("cannot create output directory " + dir.string() + ": " + e.what());
  }
  const auto summaries = summarize_countries(inputs.markets, options.contract_weighted);
  auto emit = [&](const std::string& name, const std::function<void(std::ostream&)>& body) {
    write_file(dir / name, body);
    manifest.outputs.push_back(name);
  };
  std::uint64_t correlation_stream = 0;
  auto next_seed = [&] { return derive_seed(options.seed, correlation_stream++); };

  emit("markets.csv", [&](std::ostream& out) { write_markets_csv(out, inputs.markets); });

  emit("sb_rates.csv", [&](std::ostream& out) {
    csv::write_row(out, {"country", "sb_rate", "n_contracts"});
    for (const auto& s : summaries) csv::write_row(out, {s.country, format_optional(s.sb_rate), std::to_string(s.n_contracts)});
  });

  std::map<std::string, double> sb_by_country, share_by_country;
  for (const auto& s : summaries) {
    if (s.sb_rate) sb_by_country[s.country] = *s.sb_rate;
    if (s.core_share) share_by_country[s.country] = *s.core_share;
  }

  if (inputs.indicators.empty()) {
    manifest.omitted["indicator_correlations.csv"] = "no indicator files supplied";
  } else {
    emit("indicator_correlations.csv", [&](std::ostream& out) {
      csv::write_row(out, {"indicator", "indicator_year", "polarity", "expected_sign", "n", "r", "ci_low", "ci_high",
                           "n_boot", "sign_matches_polarity", "note"});
      for (const auto& ind : inputs.indicators) {
        const auto joined = join_with_indicator(sb_by_country, ind);
        const auto row = correlate(joined.x, joined.y, options.n_boot, next_seed());
        std::vector<std::string> fields{ind.name, ind.year ? std::to_string(ind.year) : "NA",
                                        std::string(to_string(ind.polarity)), std::to_string(expected_sign(ind.polarity))};
        for (auto& f : correlation_fields(row, joined.x.size())) fields.push_back(std::move(f));
        fields.push_back(row.result ? ((row.result->r * expected_sign(ind.polarity) > 0) ? "1" : "0") : "NA");
        fields.push_back(row.note);
        csv::write_row(out, fields);
      }
    });
  }

  emit("centralization.csv", [&](std::ostream& out) {
    std::vector<std::string> header{"country", "core_share", "sb_rate"};
    for (const auto& ind : inputs.indicators) header.push_back(ind.name);
    csv::write_row(out, header);
    for (const auto& s : summaries) {
      std::vector<std::string> fields{s.country, format_optional(s.core_share), format_optional(s.sb_rate)};
      for (const auto& ind : inputs.indicators) {
        auto it = ind.values.find(s.country);
        fields.push_back(it == ind.values.end() ? "NA" : format_double(it->second));
      }
      csv::write_row(out, fields);
    }
  });
  emit("centralization_correlations.csv", [&](std::ostream& out) {
    csv::write_row(out, {"x", "y", "n", "r", "ci_low", "ci_high", "n_boot", "note"});
    auto emit_pair = [&](const std::string& y_name, const std::map<std::string, double>& y_values) {
      std::vector<double> x, y;
      for (const auto& [country, share] : share_by_country) {
        auto it = y_values.find(country);
        if (it == y_values.end()) continue;
        x.push_back(share);
        y.push_back(it->second);
      }
      const auto row = correlate(x, y, options.n_boot, next_seed());
      std::vector<std::string> fields{"core_share", y_name};
      for (auto& f : correlation_fields(row, x.size())) fields.push_back(std::move(f));
      fields.push_back(row.note);
      csv::write_row(out, fields);
    };
    emit_pair("sb_rate", sb_by_country);
    for (const auto& ind : inputs.indicators) {
      std::map<std::string, double> values(ind.values.begin(), ind.values.end());
      emit_pair(ind.name, values);
    }
  });

  if (options.null_model) {
    emit("core_sb_null.csv", [&](std::ostream& out) {
      csv::write_row(out, {"country", "core_sb_rate", "core_ratio", "core_z", "n_periods"});
      for (const auto& s : summaries) {
        csv::write_row(out, {s.country, format_optional(s.core_sb_rate), format_optional(s.core_ratio),
                             format_optional(s.core_z), std::to_string(s.n_periods)});
      }
    });
  } else {
    manifest.omitted["core_sb_null.csv"] = "null model disabled";
  }

  if (options.communities) {
    emit("modularity.csv", [&](std::ostream& out) {
      csv::write_row(out, {"country", "modularity", "modularity_seed_std", "n_periods"});
      for (const auto& s : summaries) {
        csv::write_row(out, {s.country, format_optional(s.modularity), format_optional(s.modularity_seed_std),
                             std::to_string(s.n_periods)});
      }
    });
  } else {
    manifest.omitted["modularity.csv"] = "community detection disabled";
  }

  if (options.null_model && options.communities) {
    emit("sb_clustering.csv", [&](std::ostream& out) {
      csv::write_row(out, {"country", "cv", "cv_ratio", "cv_z", "n_periods"});
      for (const auto& s : summaries) {
        csv::write_row(out, {s.country, format_optional(s.cv), format_optional(s.cv_ratio), format_optional(s.cv_z),
                             std::to_string(s.n_periods)});
      }
    });
    emit("core_vs_clustering.csv", [&](std::ostream& out) {
      // Countries whose single-bidding rate is above the mean over countries.
      double mean = 0.0;
      for (const auto& [c, v] : sb_by_country) mean += v;
      if (!sb_by_country.empty()) mean /= static_cast<double>(sb_by_country.size());
      csv::write_row(out, {"country", "sb_rate", "core_ratio", "cv_ratio"});
      for (const auto& s : summaries) {
        if (!s.sb_rate || *s.sb_rate <= mean) continue;
        csv::write_row(out, {s.country, format_optional(s.sb_rate), format_optional(s.core_ratio), format_optional(s.cv_ratio)});
      }
    });
  } else {
    const std::string reason = options.null_model ? "community detection disabled" : "null model disabled";
    manifest.omitted["sb_clustering.csv"] = reason;
    manifest.omitted["core_vs_clustering.csv"] = reason;
  }

  write_manifest(dir, manifest);
}

}  // namespace procnet
