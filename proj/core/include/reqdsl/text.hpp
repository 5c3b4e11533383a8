#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/types.hpp"

namespace reqdsl::text {

/// A word or punctuation token. Word tokens keep hyphens, slashes,
/// apostrophes, percent signs and decimal points between digits, so
/// "km/h", "tip-blinking", "vehicle's" and "0.05s" stay whole.
struct Token {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string_view text;
  bool word = false;
};

std::vector<Token> tokenize(std::string_view s);

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool starts_with_digit(std::string_view s) noexcept;
/// At least one letter and no lowercase letters.
bool is_upper_word(std::string_view s) noexcept;
bool starts_upper(std::string_view s) noexcept;

/// Lowercased words of a lexicon phrase.
std::vector<std::string> phrase_words(std::string_view phrase);

/// Number of tokens matched when `words` occur as consecutive word tokens
/// starting at `at` (case-insensitive), otherwise 0.
std::size_t match_words(const std::vector<Token>& tokens, std::size_t at,
                        const std::vector<std::string>& words);

/// Naive splitter: a sentence ends at ".", "!" or "?" followed by
/// whitespace and an uppercase letter. Spans are trimmed.
std::vector<Span> split_sentences(std::string_view s);

/// Trimmed text with trailing sentence punctuation removed and inner
/// whitespace collapsed.
std::string normalize_for_comparison(std::string_view s);

}  // namespace reqdsl::text
