#include "procnet/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <unordered_set>

#include "procnet/errors.hpp"

namespace procnet {

namespace {

// ASCII folding for U+00C0..U+024F. nullptr keeps the character unchanged,
// " " marks a symbol that separates words.
constexpr const char* kLatinFold[] = {
    "a", "a", "a", "a", "a", "a", "ae", "c",  // U+00C0
    "e", "e", "e", "e", "i", "i", "i", "i",  // U+00C8
    "d", "n", "o", "o", "o", "o", "o", " ",  // U+00D0
    "o", "u", "u", "u", "u", "y", "th", "ss",  // U+00D8
    "a", "a", "a", "a", "a", "a", "ae", "c",  // U+00E0
    "e", "e", "e", "e", "i", "i", "i", "i",  // U+00E8
    "d", "n", "o", "o", "o", "o", "o", " ",  // U+00F0
    "o", "u", "u", "u", "u", "y", "th", "y",  // U+00F8
    "a", "a", "a", "a", "a", "a", "c", "c",  // U+0100
    "c", "c", "c", "c", "c", "c", "d", "d",  // U+0108
    "d", "d", "e", "e", "e", "e", "e", "e",  // U+0110
    "e", "e", "e", "e", "g", "g", "g", "g",  // U+0118
    "g", "g", "g", "g", "h", "h", "h", "h",  // U+0120
    "i", "i", "i", "i", "i", "i", "i", "i",  // U+0128
    "i", "i", "ij", "ij", "j", "j", "k", "k",  // U+0130
    "k", "l", "l", "l", "l", "l", "l", "l",  // U+0138
    "l", "l", "l", "n", "n", "n", "n", "n",  // U+0140
    "n", "n", "ng", "ng", "o", "o", "o", "o",  // U+0148
    "o", "o", "oe", "oe", "r", "r", "r", "r",  // U+0150
    "r", "r", "s", "s", "s", "s", "s", "s",  // U+0158
    "s", "s", "t", "t", "t", "t", "t", "t",  // U+0160
    "u", "u", "u", "u", "u", "u", "u", "u",  // U+0168
    "u", "u", "u", "u", "w", "w", "y", "y",  // U+0170
    "y", "z", "z", "z", "z", "z", "z", "s",  // U+0178
    "b", "b", nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,  // U+0180
    nullptr, "d", "d", nullptr, nullptr, nullptr, nullptr, nullptr,  // U+0188
    nullptr, "f", "f", nullptr, nullptr, nullptr, nullptr, "i",  // U+0190
    nullptr, nullptr, "l", nullptr, nullptr, nullptr, nullptr, nullptr,  // U+0198
    "o", "o", nullptr, nullptr, "p", "p", nullptr, nullptr,  // U+01A0
    nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, "u",  // U+01A8
    "u", nullptr, nullptr, nullptr, nullptr, "z", "z", nullptr,  // U+01B0
    nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr,  // U+01B8
    nullptr, nullptr, nullptr, nullptr, "dz", "dz", "dz", "lj",  // U+01C0
    "lj", "lj", "nj", "nj", "nj", "a", "a", "i",  // U+01C8
    "i", "o", "o", "u", "u", "u", "u", "u",  // U+01D0
    "u", "u", "u", "u", "u", nullptr, "a", "a",  // U+01D8
    "a", "a", nullptr, nullptr, "g", "g", "g", "g",  // U+01E0
    "k", "k", "o", "o", "o", "o", nullptr, nullptr,  // U+01E8
    "j", "dz", "dz", "dz", "g", "g", nullptr, nullptr,  // U+01F0
    "n", "n", "a", "a", nullptr, nullptr, nullptr, nullptr,  // U+01F8
    "a", "a", "a", "a", "e", "e", "e", "e",  // U+0200
    "i", "i", "i", "i", "o", "o", "o", "o",  // U+0208
    "r", "r", "r", "r", "u", "u", "u", "u",  // U+0210
    "s", "s", "t", "t", nullptr, nullptr, "h", "h",  // U+0218
    nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, "a", "a",  // U+0220
    "e", "e", "o", "o", "o", "o", "o", "o",  // U+0228
    "o", "o", "y", "y", nullptr, nullptr, nullptr, nullptr,  // U+0230
    nullptr, nullptr, "a", "c", "c", "l", "t", nullptr,  // U+0238
    nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, "e", "e",  // U+0240
    "j", "j", nullptr, nullptr, "r", "r", "y", "y",  // U+0248
};
constexpr char32_t kFoldFirst = 0xC0;
constexpr char32_t kFoldLast = 0x24F;

struct Decoded {
  char32_t cp;
  std::size_t length;  // 0 for an invalid sequence
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0, 0};
  }
  if (i + len > s.size()) return {0, 0};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0, 0};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_deleted_mark(char32_t cp) {
  return cp == '.' || cp == '\'' || cp == 0x2019 /* right single quote */ || cp == 0x02BC;
}

bool is_separator(char32_t cp) {
  if (cp < 0x80) return !(std::isalnum(static_cast<int>(cp)));
  if (cp >= 0x80 && cp <= 0xBF) return true;                 // Latin-1 controls, NBSP and symbols
  if (cp >= 0x2000 && cp <= 0x206F) return true;             // general punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return true;             // CJK punctuation
  if (cp == 0xFEFF) return true;
  return false;
}

void append_space(std::string& out) {
  if (!out.empty() && out.back() != ' ') out.push_back(' ');
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(' ', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) words.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return words;
}

}  // namespace

const std::vector<std::string>& default_legal_suffixes() {
  static const std::vector<std::string> suffixes = {"ltd", "gmbh", "kft", "zrt", "sa", "srl", "sro",
                                                    "spzoo", "bv", "oy", "ab", "as", "sas", "plc"};
  return suffixes;
}

std::string normalize_entity_name(std::string_view raw, const NormalizeOptions& options) {
  std::string folded;
  folded.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    const auto [cp, len] = decode_utf8(raw, i);
    if (len == 0) {
      append_space(folded);
      ++i;
      continue;
    }
    const auto bytes = raw.substr(i, len);
    i += len;

    if (is_deleted_mark(cp)) continue;
    if (cp >= kFoldFirst && cp <= kFoldLast) {
      const char* ascii = kLatinFold[cp - kFoldFirst];
      if (ascii == nullptr) {
        folded.append(bytes);
      } else if (ascii[0] == ' ') {
        append_space(folded);
      } else {
        folded.append(ascii);
      }
      continue;
    }
    if (is_separator(cp)) {
      append_space(folded);
      continue;
    }
    if (cp < 0x80) {
      folded.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
    } else {
      folded.append(bytes);
    }
  }

  auto words = split_words(folded);
  const std::unordered_set<std::string> suffixes(options.legal_suffixes.begin(), options.legal_suffixes.end());
  for (bool stripped = true; stripped;) {
    stripped = false;
    for (std::size_t k = 1; k <= 3 && k < words.size(); ++k) {
      std::string joined;
      for (std::size_t j = words.size() - k; j < words.size(); ++j) joined += words[j];
      if (suffixes.contains(joined)) {
        words.resize(words.size() - k);
        stripped = true;
        break;
      }
    }
  }

  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  if (out.empty()) throw DataError("name reduces to empty");
  return out;
}

}  // namespace procnet
