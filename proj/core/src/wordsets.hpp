#pragma once

// Closed word classes used by the heuristics. These are grammar, not
// domain vocabulary, so they live in code rather than lexicon files.

#include <algorithm>
#include <initializer_list>
#include <string_view>
#include <vector>

#include "reqdsl/text.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl::detail {

inline bool in_set(std::string_view word, std::initializer_list<std::string_view> set) {
  return std::any_of(set.begin(), set.end(),
                     [&](std::string_view w) { return text::iequals(word, w); });
}

inline bool is_determiner(std::string_view w) { return in_set(w, {"the", "a", "an"}); }

inline bool is_copula(std::string_view w) { return in_set(w, {"is", "are", "be"}); }

inline bool is_negation(std::string_view w) { return in_set(w, {"not", "never", "cannot"}); }

inline bool is_verb_group_word(std::string_view w) {
  return in_set(w, {"must", "shall", "should", "can", "could", "will", "would", "may", "might",
                    "has", "have", "had", "to", "be", "is", "are", "was", "were", "been", "does",
                    "do", "did", "not", "never", "cannot", "always"});
}

// Words that open the verb group ending a subject noun phrase.
inline bool starts_verb_group(std::string_view w) {
  return in_set(w, {"must", "shall", "should", "can", "could", "will", "would", "may", "might",
                    "has", "have", "had", "is", "are", "was", "were", "be", "does", "do", "did",
                    "not", "never", "cannot"});
}

inline bool is_preposition_or_conjunction(std::string_view w) {
  return in_set(w, {"of", "to", "in", "on", "at", "for", "from", "with", "by", "between", "and",
                    "or", "into", "within", "under", "over", "about", "per"});
}

inline bool is_clause_boundary_word(std::string_view w) {
  return in_set(w, {"when", "if", "which", "that", "while", "whenever", "once", "where", "then"});
}

inline bool is_clause_boundary_punct(std::string_view t) {
  return t == "," || t == ";" || t == ":" || t == "." || t == "\"" || t == "?" || t == "!";
}

inline bool is_leading_preposition(std::string_view w) {
  return in_set(w, {"with", "by", "on", "in", "at", "during", "upon", "after", "before", "for",
                    "from"});
}

// DSL keywords; matched case-sensitively.
inline bool is_dsl_keyword(std::string_view w) {
  return w == "MUST" || w == "NOT" || w == "IF" || w == "THEN" || w == "LESS" ||
         w == "GREATER" || w == "EQUAL" || w == "OR";
}

inline bool is_symbol_operator(std::string_view t) {
  return t == "<" || t == "<=" || t == ">" || t == ">=" || t == "=" || t == "\xE2\x89\xA4" ||
         t == "\xE2\x89\xA5";
}

inline std::string_view slice(std::string_view text, Span span) {
  return text.substr(span.begin, span.end - span.begin);
}

// Token index of the first token starting at or after `offset`.
inline std::size_t token_at(const std::vector<text::Token>& tokens, std::size_t offset) {
  std::size_t i = 0;
  while (i < tokens.size() && tokens[i].begin < offset) ++i;
  return i;
}

}  // namespace reqdsl::detail
