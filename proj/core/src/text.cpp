#include "reqdsl/text.hpp"

#include <algorithm>
#include <cctype>

namespace reqdsl::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_' || c == '-' || c == '\'' || c == '/' || c == '%' ||
         u >= 0x80;
}

// U+2264 and U+2265 are tokenized as operators, not word characters.
std::size_t unicode_operator_length(std::string_view s, std::size_t i) {
  if (s.size() - i >= 3 && s.compare(i, 3, "\xE2\x89\xA4") == 0) return 3;
  if (s.size() - i >= 3 && s.compare(i, 3, "\xE2\x89\xA5") == 0) return 3;
  return 0;
}

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (auto n = unicode_operator_length(s, i)) {
      out.push_back({i, i + n, s.substr(i, n), false});
      i += n;
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < s.size()) {
        if (unicode_operator_length(s, j) != 0) break;
        if (is_word_char(s[j])) {
          ++j;
        } else if (s[j] == '.' && j > i && is_digit(s[j - 1]) && j + 1 < s.size() &&
                   is_digit(s[j + 1])) {
          ++j;
        } else {
          break;
        }
      }
      out.push_back({i, j, s.substr(i, j - i), true});
      i = j;
      continue;
    }
    if ((c == '<' || c == '>') && i + 1 < s.size() && s[i + 1] == '=') {
      out.push_back({i, i + 2, s.substr(i, 2), false});
      i += 2;
      continue;
    }
    out.push_back({i, i + 1, s.substr(i, 1), false});
    ++i;
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : trim(s)) {
    if (is_space(c)) {
      pending = true;
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

bool starts_with_digit(std::string_view s) noexcept { return !s.empty() && is_digit(s.front()); }

bool is_upper_word(std::string_view s) noexcept {
  bool letter = false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::islower(u)) return false;
    if (std::isupper(u)) letter = true;
  }
  return letter;
}

bool starts_upper(std::string_view s) noexcept {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front())) != 0;
}

std::vector<std::string> phrase_words(std::string_view phrase) {
  std::vector<std::string> out;
  for (const auto& tok : tokenize(phrase)) out.push_back(to_lower(tok.text));
  return out;
}

std::size_t match_words(const std::vector<Token>& tokens, std::size_t at,
                        const std::vector<std::string>& words) {
  if (words.empty() || at + words.size() > tokens.size()) return 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto& tok = tokens[at + k];
    if (tok.text.size() != words[k].size() || !iequals(tok.text, words[k])) return 0;
  }
  return words.size();
}

std::vector<Span> split_sentences(std::string_view s) {
  std::vector<Span> out;
  std::size_t start = 0;
  auto push = [&](std::size_t b, std::size_t e) {
    const auto piece = trim(s.substr(b, e - b));
    if (piece.empty()) return;
    const std::size_t offset = static_cast<std::size_t>(piece.data() - s.data());
    out.push_back({offset, offset + piece.size()});
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    if (j >= s.size() || !is_space(s[j])) continue;
    while (j < s.size() && is_space(s[j])) ++j;
    if (j < s.size() && std::isupper(static_cast<unsigned char>(s[j]))) {
      push(start, i + 1);
      start = j;
    }
  }
  push(start, s.size());
  return out;
}

std::string normalize_for_comparison(std::string_view s) {
  auto t = trim(s);
  auto trailing = [](char c) { return c == '.' || c == '!' || c == '?' || is_space(c); };
  while (!t.empty() && trailing(t.back())) t.remove_suffix(1);
  return collapse_whitespace(t);
}

}  // namespace reqdsl::text
