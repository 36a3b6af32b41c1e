#include "procnet/kv_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "procnet/errors.hpp"

namespace procnet {

std::string trim(std::string_view text) {
  const auto* ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(sep, start);
    if (end == std::string_view::npos) end = text.size();
    auto piece = trim(text.substr(start, end - start));
    if (!piece.empty()) out.push_back(std::move(piece));
    start = end + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view source) {
  KeyValueConfig config;
  config.source_ = std::string(source);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(config.source_ + ":" + std::to_string(line_no) + ": expected `key = value`");
    }
    auto key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw DataError(config.source_ + ":" + std::to_string(line_no) + ": empty key");
    config.entries_[std::move(key)] = trim(std::string_view(line).substr(eq + 1));
  }
  return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

bool KeyValueConfig::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_or(std::string_view key, std::string fallback) const {
  auto value = get(key);
  return value ? *value : std::move(fallback);
}

namespace {

template <class T>
T parse_number(std::string_view text, std::string_view key, const std::string& source) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw DataError(source + ": invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::optional<long long> KeyValueConfig::get_int(std::string_view key) const {
  auto value = get(key);
  if (!value) return std::nullopt;
  return parse_number<long long>(*value, key, source_);
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  auto value = get(key);
  if (!value) return std::nullopt;
  return parse_number<double>(*value, key, source_);
}

std::optional<bool> KeyValueConfig::get_bool(std::string_view key) const {
  auto value = get(key);
  if (!value) return std::nullopt;
  if (*value == "true" || *value == "1" || *value == "yes" || *value == "on") return true;
  if (*value == "false" || *value == "0" || *value == "no" || *value == "off") return false;
  throw DataError(source_ + ": invalid boolean for " + std::string(key) + ": '" + *value + "'");
}

void KeyValueConfig::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

}  // namespace procnet
