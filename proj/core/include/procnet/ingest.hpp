#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "procnet/kv_config.hpp"
#include "procnet/normalize.hpp"

namespace procnet {

/// Eight-digit CPV code. A trailing "-d" check digit is accepted on parse and
/// dropped.
class CpvCode {
 public:
  CpvCode() = default;  // "00000000"
  static std::optional<CpvCode> parse(std::string_view text);

  const std::string& full() const { return full_; }
  /// The two-digit division that defines sector classes for the null model.
  std::string_view class2() const { return std::string_view(full_).substr(0, 2); }

  bool operator==(const CpvCode&) const = default;

 private:
  explicit CpvCode(std::string full) : full_(std::move(full)) {}
  std::string full_ = "00000000";
};

enum class Role { Issuer, Winner };

std::string_view to_string(Role role);

struct ContractRecord {
  std::string contract_id;
  std::string country;
  int year = 0;
  std::string issuer_raw;
  std::string winner_raw;
  // Equal to the raw names until deduplicate_entities() assigns canonical ids.
  std::string issuer_id;
  std::string winner_id;
  CpvCode cpv;
  std::optional<int> n_bids;
  bool single_bid = false;
  std::optional<double> value;

  bool operator==(const ContractRecord&) const = default;
};

struct RejectedRow {
  std::size_t line = 0;
  std::string reason;
};

struct Provenance {
  std::string source;
  std::size_t rows_read = 0;
  std::vector<RejectedRow> rejected;
};

struct ContractTable {
  std::vector<ContractRecord> records;
  Provenance provenance;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

/// Column mapping and parse policy. Logical columns: contract_id, country,
/// year, issuer, winner, cpv, bids, value, issuer_id, winner_id.
struct FormatConfig {
  char delimiter = ',';
  std::map<std::string, std::string, std::less<>> columns = default_columns();
  /// Used when the input has no country column.
  std::string default_country;
  /// Fraction of rejected rows above which parsing fails outright.
  double max_reject_fraction = 0.5;

  static std::map<std::string, std::string, std::less<>> default_columns();

  /// Reads `delimiter`, `country`, `max_reject_fraction` and `column.<logical>`
  /// keys; anything else is ignored so one file can also hold other settings.
  static FormatConfig from_config(const KeyValueConfig& config);
};

/// Parses contract rows. Rows with a malformed CPV, year or bid count, an empty
/// issuer/winner, or a duplicate contract id are rejected and listed in
/// provenance.rejected. Throws DataError if the header lacks a required column,
/// or if more than max_reject_fraction of the rows are rejected.
ContractTable parse_contracts(std::string_view text, std::string_view source,
                              const FormatConfig& format = {});
ContractTable parse_contracts_file(const std::filesystem::path& path, const FormatConfig& format = {});

/// Canonical CSV: contract_id,country,year,issuer_raw,winner_raw,cpv,bids,value,issuer_id,winner_id.
/// Re-parsing the output with the default FormatConfig yields equal records.
void write_contracts_csv(std::ostream& out, const ContractTable& table);

struct EntityMapping {
  std::string raw_name;
  Role role = Role::Issuer;
  std::string country;
  std::string canonical_id;
};

struct DedupResult {
  ContractTable table;
  std::vector<EntityMapping> mapping;  // sorted by (role, country, raw_name)
  std::size_t issuers_before = 0;
  std::size_t issuers_after = 0;
  std::size_t winners_before = 0;
  std::size_t winners_after = 0;
  std::vector<RejectedRow> rejected;  // names that normalize to nothing
};

/// Canonical id of an entity: "<I|W>:<country>:<normalized name>". Roles and
/// countries never share ids.
std::string canonical_entity_id(Role role, std::string_view country, std::string_view normalized);

/// Replaces issuer_id/winner_id with canonical ids computed from the raw names,
/// so applying it twice equals applying it once.
DedupResult deduplicate_entities(const ContractTable& table, const NormalizeOptions& options = {});

void write_entity_mapping_csv(std::ostream& out, std::span<const EntityMapping> mapping);

struct YearRange {
  int first = 0;
  int last = 0;
  bool contains(int year) const { return year >= first && year <= last; }
  /// "2008:2016" or a single year "2014".
  static YearRange parse(std::string_view text);
};

struct ContractFilter {
  std::optional<std::string> country;
  std::optional<YearRange> years;
  bool require_bids = true;
};

/// Keeps records matching every supplied predicate, in order.
ContractTable filter_contracts(const ContractTable& table, const ContractFilter& filter);

}  // namespace procnet
