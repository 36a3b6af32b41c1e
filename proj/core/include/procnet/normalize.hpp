#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace procnet {

/// Legal-form tokens stripped from the end of entity names.
const std::vector<std::string>& default_legal_suffixes();

struct NormalizeOptions {
  std::vector<std::string> legal_suffixes = default_legal_suffixes();
};

/// Canonical form of an entity name used for exact-match deduplication.
///
/// Rules, applied in order:
///   1. Latin accented letters are folded to ASCII ("ñ" -> "n", "ß" -> "ss").
///   2. ASCII letters are lowercased.
///   3. '.' and apostrophes are deleted, so "S.R.L" becomes "srl".
///   4. Every other ASCII or Latin-1 punctuation/symbol becomes a space.
///      Non-Latin letters (Greek, Cyrillic, ...) are kept byte-for-byte.
///   5. Whitespace runs collapse to a single space.
///   6. Trailing legal-form tokens are removed repeatedly. A suffix also
///      matches when split across up to three trailing tokens ("sp z oo"
///      matches "spzoo"). The first token is never removed.
///
/// Throws DataError("name reduces to empty") when nothing is left.
std::string normalize_entity_name(std::string_view raw, const NormalizeOptions& options = {});

}  // namespace procnet
