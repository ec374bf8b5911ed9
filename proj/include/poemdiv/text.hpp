#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace poemdiv {

/// Splits a verse line into normalized tokens: Unicode punctuation (general
/// categories P*) is removed first, the remainder is split on whitespace, and
/// tokens are lowercased unless `lowercase` is false. Removal happens before
/// splitting, so punctuation inside a word fuses its fragments ("to-day" ->
/// "today"). Empty input yields an empty list.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = true);

/// Joins tokens with a single space.
std::string join_tokens(const std::vector<std::string>& tokens);

/// Decodes UTF-8 into codepoints; malformed bytes become U+FFFD.
std::u32string decode_utf8(std::string_view text);

/// Encodes codepoints back to UTF-8.
std::string encode_utf8(std::u32string_view text);

}  // namespace poemdiv
