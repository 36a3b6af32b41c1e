#include "procnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "procnet/csv.hpp"
#include "procnet/errors.hpp"

namespace procnet {

namespace {

template <class T>
std::optional<T> parse_exact(std::string_view text) {
  T value{};
  if (text.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::optional<CpvCode> CpvCode::parse(std::string_view text) {
  auto trimmed = trim(text);
  std::string_view s = trimmed;
  if (s.size() == 10 && s[8] == '-' && s[9] >= '0' && s[9] <= '9') s = s.substr(0, 8);
  if (s.size() != 8 || !all_digits(s)) return std::nullopt;
  return CpvCode(std::string(s));
}

std::string_view to_string(Role role) { return role == Role::Issuer ? "issuer" : "winner"; }

std::map<std::string, std::string, std::less<>> FormatConfig::default_columns() {
  return {{"contract_id", "contract_id"}, {"country", "country"},     {"year", "year"},
          {"issuer", "issuer_raw"},       {"winner", "winner_raw"},   {"cpv", "cpv"},
          {"bids", "bids"},               {"value", "value"},         {"issuer_id", "issuer_id"},
          {"winner_id", "winner_id"}};
}

FormatConfig FormatConfig::from_config(const KeyValueConfig& config) {
  FormatConfig format;
  if (auto d = config.get("delimiter")) {
    if (*d == "tab" || *d == "\\t") {
      format.delimiter = '\t';
    } else if (d->size() == 1) {
      format.delimiter = d->front();
    } else {
      throw DataError(config.source() + ": delimiter must be a single character or 'tab'");
    }
  }
  if (auto c = config.get("country")) format.default_country = *c;
  if (auto f = config.get_double("max_reject_fraction")) format.max_reject_fraction = *f;
  for (const auto& [key, value] : config.entries()) {
    if (!key.starts_with("column.")) continue;
    auto logical = key.substr(7);
    if (!format.columns.contains(logical)) {
      throw DataError(config.source() + ": unknown logical column '" + logical + "'");
    }
    format.columns[logical] = value;
  }
  return format;
}

ContractTable parse_contracts(std::string_view text, std::string_view source, const FormatConfig& format) {
  const auto rows = csv::parse(text, format.delimiter);
  if (rows.empty()) throw DataError(std::string(source) + ": no header row");

  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < rows.front().fields.size(); ++i) header.emplace(trim(rows.front().fields[i]), i);

  auto column = [&](std::string_view logical) -> std::optional<std::size_t> {
    auto it = format.columns.find(logical);
    if (it == format.columns.end()) return std::nullopt;
    auto h = header.find(it->second);
    if (h == header.end()) return std::nullopt;
    return h->second;
  };
  auto required = [&](std::string_view logical) {
    auto idx = column(logical);
    if (!idx) {
      throw DataError(std::string(source) + ": header lacks column '" + format.columns.at(std::string(logical)) +
                      "' (" + std::string(logical) + ")");
    }
    return *idx;
  };

  const auto c_issuer = required("issuer");
  const auto c_winner = required("winner");
  const auto c_year = required("year");
  const auto c_cpv = required("cpv");
  const auto c_bids = required("bids");
  const auto c_id = column("contract_id");
  const auto c_country = column("country");
  const auto c_value = column("value");
  const auto c_issuer_id = column("issuer_id");
  const auto c_winner_id = column("winner_id");
  if (!c_country && format.default_country.empty()) {
    throw DataError(std::string(source) + ": no country column and no default country configured");
  }

  ContractTable table;
  table.provenance.source = std::string(source);
  std::unordered_set<std::string> seen_ids;
  const std::size_t n_fields = rows.front().fields.size();

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ++table.provenance.rows_read;
    auto reject = [&](std::string reason) { table.provenance.rejected.push_back({row.line, std::move(reason)}); };
    if (row.fields.size() != n_fields) {
      reject("expected " + std::to_string(n_fields) + " fields, found " + std::to_string(row.fields.size()));
      continue;
    }
    const auto& f = row.fields;

    ContractRecord rec;
    rec.contract_id = c_id ? trim(f[*c_id]) : "row" + std::to_string(row.line);
    if (rec.contract_id.empty()) {
      reject("missing contract_id");
      continue;
    }
    rec.country = c_country ? trim(f[*c_country]) : format.default_country;
    if (rec.country.empty()) rec.country = format.default_country;

    auto year = parse_exact<int>(trim(f[c_year]));
    if (!year) {
      reject("malformed year");
      continue;
    }
    rec.year = *year;

    rec.issuer_raw = f[c_issuer];
    rec.winner_raw = f[c_winner];
    if (trim(rec.issuer_raw).empty()) {
      reject("missing issuer");
      continue;
    }
    if (trim(rec.winner_raw).empty()) {
      reject("missing winner");
      continue;
    }

    auto cpv = CpvCode::parse(f[c_cpv]);
    if (!cpv) {
      reject("malformed CPV");
      continue;
    }
    rec.cpv = *cpv;

    const auto bids_text = trim(f[c_bids]);
    if (!bids_text.empty()) {
      auto bids = parse_exact<int>(bids_text);
      if (!bids) {
        reject("non-integer bids");
        continue;
      }
      if (*bids <= 0) {
        reject("non-positive bids");
        continue;
      }
      rec.n_bids = *bids;
      rec.single_bid = *bids == 1;
    }

    if (c_value) {
      const auto value_text = trim(f[*c_value]);
      if (!value_text.empty()) {
        auto value = parse_exact<double>(value_text);
        if (!value || !std::isfinite(*value) || *value < 0) {
          reject("malformed value");
          continue;
        }
        rec.value = *value;
      }
    }

    rec.issuer_id = (c_issuer_id && !f[*c_issuer_id].empty()) ? f[*c_issuer_id] : rec.issuer_raw;
    rec.winner_id = (c_winner_id && !f[*c_winner_id].empty()) ? f[*c_winner_id] : rec.winner_raw;

    if (!seen_ids.insert(rec.contract_id).second) {
      reject("duplicate contract_id");
      continue;
    }
    table.records.push_back(std::move(rec));
  }

  const auto n_rejected = table.provenance.rejected.size();
  if (table.provenance.rows_read > 0 &&
      static_cast<double>(n_rejected) > format.max_reject_fraction * static_cast<double>(table.provenance.rows_read)) {
    const auto& first = table.provenance.rejected.front();
    throw DataError(std::string(source) + ": " + std::to_string(n_rejected) + " of " +
                    std::to_string(table.provenance.rows_read) + " rows rejected (first: line " +
                    std::to_string(first.line) + ", " + first.reason + "); check the column mapping");
  }
  return table;
}

ContractTable parse_contracts_file(const std::filesystem::path& path, const FormatConfig& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_contracts(buf.str(), path.string(), format);
}

void write_contracts_csv(std::ostream& out, const ContractTable& table) {
  csv::write_row(out, {"contract_id", "country", "year", "issuer_raw", "winner_raw", "cpv", "bids", "value",
                       "issuer_id", "winner_id"});
  for (const auto& r : table.records) {
    csv::write_row(out, {r.contract_id, r.country, std::to_string(r.year), r.issuer_raw, r.winner_raw, r.cpv.full(),
                         r.n_bids ? std::to_string(*r.n_bids) : std::string(),
                         r.value ? csv::format_double(*r.value) : std::string(), r.issuer_id, r.winner_id});
  }
}

std::string canonical_entity_id(Role role, std::string_view country, std::string_view normalized) {
  std::string id(role == Role::Issuer ? "I:" : "W:");
  id += country;
  id += ':';
  id += normalized;
  return id;
}

DedupResult deduplicate_entities(const ContractTable& table, const NormalizeOptions& options) {
  DedupResult result;
  result.table.provenance = table.provenance;

  using Key = std::tuple<Role, std::string, std::string>;  // role, country, raw
  std::map<Key, std::string> canonical;
  std::map<Key, std::string> failed;
  auto resolve = [&](Role role, const std::string& country, const std::string& raw) -> const std::string* {
    Key key{role, country, raw};
    if (auto it = canonical.find(key); it != canonical.end()) return &it->second;
    if (failed.contains(key)) return nullptr;
    try {
      auto id = canonical_entity_id(role, country, normalize_entity_name(raw, options));
      return &canonical.emplace(std::move(key), std::move(id)).first->second;
    } catch (const DataError& e) {
      failed.emplace(std::move(key), e.what());
      return nullptr;
    }
  };

  for (std::size_t i = 0; i < table.records.size(); ++i) {
    const auto& rec = table.records[i];
    const auto* issuer = resolve(Role::Issuer, rec.country, rec.issuer_raw);
    const auto* winner = resolve(Role::Winner, rec.country, rec.winner_raw);
    if (!issuer || !winner) {
      result.rejected.push_back({i + 1, std::string(issuer ? "winner" : "issuer") + " name reduces to empty (contract " +
                                            rec.contract_id + ")"});
      continue;
    }
    auto out = rec;
    out.issuer_id = *issuer;
    out.winner_id = *winner;
    result.table.records.push_back(std::move(out));
  }

  std::set<std::string> issuers_after, winners_after;
  for (const auto& [key, id] : canonical) {
    const auto& [role, country, raw] = key;
    result.mapping.push_back({raw, role, country, id});
    if (role == Role::Issuer) {
      ++result.issuers_before;
      issuers_after.insert(id);
    } else {
      ++result.winners_before;
      winners_after.insert(id);
    }
  }
  for (const auto& [key, reason] : failed) {
    (std::get<0>(key) == Role::Issuer ? result.issuers_before : result.winners_before)++;
  }
  result.issuers_after = issuers_after.size();
  result.winners_after = winners_after.size();
  return result;
}

void write_entity_mapping_csv(std::ostream& out, std::span<const EntityMapping> mapping) {
  csv::write_row(out, {"raw_name", "role", "country", "canonical_id"});
  for (const auto& m : mapping) {
    csv::write_row(out, {m.raw_name, std::string(to_string(m.role)), m.country, m.canonical_id});
  }
}

YearRange YearRange::parse(std::string_view text) {
  const auto colon = text.find(':');
  auto first = parse_exact<int>(trim(text.substr(0, colon)));
  auto last = colon == std::string_view::npos ? first : parse_exact<int>(trim(text.substr(colon + 1)));
  if (!first || !last || *last < *first) {
    throw DataError("invalid year range '" + std::string(text) + "' (expected FIRST:LAST)");
  }
  return {*first, *last};
}

ContractTable filter_contracts(const ContractTable& table, const ContractFilter& filter) {
  ContractTable out;
  out.provenance = table.provenance;
  for (const auto& r : table.records) {
    if (filter.country && r.country != *filter.country) continue;
    if (filter.years && !filter.years->contains(r.year)) continue;
    if (filter.require_bids && !r.n_bids) continue;
    out.records.push_back(r);
  }
  return out;
}

}  // namespace procnet
