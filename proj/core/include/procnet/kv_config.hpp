#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace procnet {

/// Plain-text `key = value` configuration. Lines starting with '#' and blank
/// lines are ignored; surrounding whitespace is trimmed; later keys override
/// earlier ones.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text, std::string_view source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool contains(std::string_view key) const;
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;

  // Typed getters throw DataError naming the key when the value does not parse.
  std::optional<long long> get_int(std::string_view key) const;
  std::optional<double> get_double(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;

  void set(std::string key, std::string value);

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  std::string source_;
};

/// Splits on `sep`, trimming whitespace and dropping empty pieces.
std::vector<std::string> split_list(std::string_view text, char sep = ',');

std::string trim(std::string_view text);

}  // namespace procnet
