#include <algorithm>
#include <string>

#include "reqdsl/constraints.hpp"
#include "reqdsl/text.hpp"
#include "wordsets.hpp"

namespace reqdsl {

namespace {

using text::Token;
using detail::in_set;

struct ParsedValue {
  ConstraintValue value;
  std::optional<std::string> unit;
  Span span;
};

bool is_ratio_at(const std::vector<Token>& tokens, std::size_t j) {
  return j + 2 < tokens.size() && tokens[j + 1].text == ":" &&
         text::starts_with_digit(tokens[j + 2].text) && tokens[j + 1].begin == tokens[j].end;
}

std::size_t numeric_prefix(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i + 1 < s.size() && s[i] == '.' && s[i + 1] >= '0' && s[i + 1] <= '9') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  }
  return i;
}

// Number with optional unit, or a capitalized symbolic token.
std::optional<ParsedValue> parse_value(const std::vector<Token>& tokens, std::size_t j,
                                       const Lexicon& lexicon) {
  if (j >= tokens.size() || !tokens[j].word) return std::nullopt;
  const auto& tok = tokens[j];
  if (text::starts_with_digit(tok.text)) {
    const auto n = numeric_prefix(tok.text);
    const auto suffix = tok.text.substr(n);
    if (suffix.empty()) {
      ParsedValue pv{ConstraintValue::make_number(std::string(tok.text)), std::nullopt,
                     {tok.begin, tok.end}};
      if (j + 1 < tokens.size() && tokens[j + 1].word) {
        if (const auto* unit = lexicon.find_unit(tokens[j + 1].text)) {
          pv.unit = unit->canonical;
          pv.span.end = tokens[j + 1].end;
        }
      }
      return pv;
    }
    if (const auto* unit = lexicon.find_unit(suffix))
      return ParsedValue{ConstraintValue::make_number(std::string(tok.text.substr(0, n))),
                         unit->canonical,
                         {tok.begin, tok.end}};
    return ParsedValue{ConstraintValue::make_symbol(std::string(tok.text)), std::nullopt,
                       {tok.begin, tok.end}};
  }
  if (text::starts_upper(tok.text) && !detail::is_dsl_keyword(tok.text))
    return ParsedValue{ConstraintValue::make_symbol(std::string(tok.text)), std::nullopt,
                       {tok.begin, tok.end}};
  return std::nullopt;
}

// Index just past the parenthetical ending at `close` when walking
// backwards, i.e. the index of the matching "(".
std::optional<std::size_t> matching_open(const std::vector<Token>& tokens, std::size_t close) {
  int depth = 0;
  for (std::size_t k = close + 1; k-- > 0;) {
    if (tokens[k].text == ")") ++depth;
    if (tokens[k].text == "(" && --depth == 0) return k;
  }
  return std::nullopt;
}

// Start of the clause region ending before token `p`, skipping
// parentheticals. Returns the region start and the boundary index (or
// npos when the region reaches the text start).
std::pair<std::size_t, std::size_t> clause_region(const std::vector<Token>& tokens,
                                                  std::size_t p) {
  std::size_t k = p;
  while (k > 0) {
    const auto& t = tokens[k - 1];
    if (t.text == ")") {
      if (auto open = matching_open(tokens, k - 1)) {
        k = *open;
        continue;
      }
      return {k, k - 1};
    }
    if (t.text == "(" || (!t.word && detail::is_clause_boundary_punct(t.text)) ||
        detail::is_symbol_operator(t.text) || (t.word && detail::is_clause_boundary_word(t.text)))
      return {k, k - 1};
    --k;
  }
  return {0, std::string_view::npos};
}

// Subject noun phrase of the clause that ends right before token `p`.
Span find_subject(const std::vector<Token>& tokens, std::size_t p, int fallback_depth = 0) {
  const auto [r, boundary] = clause_region(tokens, p);
  std::size_t vg = r;
  while (vg < p && !detail::starts_verb_group(tokens[vg].text)) ++vg;
  if (vg == r) {
    // "... a speed which exceeds": fall back to the previous clause.
    if (fallback_depth == 0 && boundary != std::string_view::npos &&
        in_set(tokens[boundary].text, {"which", "that"}))
      return find_subject(tokens, boundary, 1);
    const auto at = r < tokens.size() ? tokens[r].begin : 0;
    return {at, at};
  }
  std::size_t start = r;
  for (std::size_t d = r; d < vg; ++d) {
    if (!detail::is_determiner(tokens[d].text)) continue;
    if (d == r || !detail::is_preposition_or_conjunction(tokens[d - 1].text)) start = d;
  }
  return {tokens[start].begin, tokens[vg - 1].end};
}

struct Negation {
  std::size_t token;     // the negation word
  std::size_t aux;       // "does"/"do"/"did" directly before it, else == token
};

std::optional<Negation> find_negation(const std::vector<Token>& tokens, std::size_t p) {
  std::size_t k = p;
  int steps = 0;
  while (k > 0 && steps < 4 && tokens[k - 1].word && detail::is_verb_group_word(tokens[k - 1].text)) {
    --k;
    ++steps;
    if (detail::is_negation(tokens[k].text)) {
      Negation n{k, k};
      if (k > 0 && in_set(tokens[k - 1].text, {"does", "do", "did"})) n.aux = k - 1;
      return n;
    }
  }
  return std::nullopt;
}

std::string join_words(const std::vector<Token>& tokens, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t k = from; k < to; ++k) {
    if (!out.empty()) out.push_back(' ');
    out.append(tokens[k].text);
  }
  return out;
}

std::string verb_for_aux(std::string_view aux) {
  if (text::iequals(aux, "does")) return "is";
  if (text::iequals(aux, "do")) return "are";
  if (text::iequals(aux, "did")) return "was";
  return "be";
}

std::optional<ComparisonOp> superlative_in(std::string_view text, Span subject,
                                           const Lexicon& lexicon) {
  for (const auto& tok : text::tokenize(detail::slice(text, subject)))
    if (tok.word)
      if (auto op = lexicon.superlative_op(tok.text)) return op;
  return std::nullopt;
}

void attach_value(ComparatorMatch& m, const std::vector<Token>& tokens, std::size_t j,
                  const Lexicon& lexicon) {
  if (auto pv = parse_value(tokens, j, lexicon)) {
    m.value = std::move(pv->value);
    m.unit = std::move(pv->unit);
    m.value_span = pv->span;
  }
}

}  // namespace

ComparatorScan scan_comparators(std::string_view text, const Lexicon& lexicon) {
  ComparatorScan scan;
  const auto tokens = text::tokenize(text);

  // Negation (if any) folds the surface operator.
  auto fold = [&](ComparatorMatch& m, std::size_t first) {
    m.op = m.surface_op;
    if (auto neg = find_negation(tokens, first)) {
      m.negation = Span{tokens[neg->token].begin, tokens[neg->token].end};
      m.op = negate(m.surface_op);
      return neg;
    }
    return std::optional<Negation>{};
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& tok = tokens[i];

    // DSL keywords, case-sensitive. The connector of a compound keyword may
    // be written in lowercase.
    if (tok.word && (tok.text == "LESS" || tok.text == "GREATER" || tok.text == "EQUAL")) {
      ComparatorMatch m;
      m.kind = ComparatorKind::Keyword;
      std::size_t end = i + 1;
      if (tok.text != "EQUAL" && i + 2 < tokens.size() && text::iequals(tokens[i + 1].text, "or") &&
          tokens[i + 2].text == "EQUAL")
        end = i + 3;
      const std::string keyword =
          end == i + 3 ? std::string(tok.text) + " OR EQUAL" : std::string(tok.text);
      m.surface_op = *op_from_keyword(keyword);
      m.phrase = {tok.begin, tokens[end - 1].end};
      m.site = m.phrase;
      if (end < tokens.size() && tokens[end].word &&
          in_set(tokens[end].text, {"than", "to"}) &&
          (text::is_upper_word(tokens[end].text) || !text::iequals(tokens[end].text, "to"))) {
        m.stray = Span{tokens[end].begin, tokens[end].end};
        m.site.end = tokens[end].end;
        m.fix_hint = keyword;
        ++end;
      }
      fold(m, i);
      m.subject = find_subject(tokens, i);
      attach_value(m, tokens, end, lexicon);
      scan.matches.push_back(std::move(m));
      i = end;
      continue;
    }

    if (!tok.word && detail::is_symbol_operator(tok.text)) {
      ComparatorMatch m;
      m.kind = ComparatorKind::Symbol;
      m.surface_op = *op_from_math(tok.text);
      m.phrase = {tok.begin, tok.end};
      m.site = m.phrase;
      fold(m, i);
      m.subject = find_subject(tokens, i);
      attach_value(m, tokens, i + 1, lexicon);
      scan.matches.push_back(std::move(m));
      ++i;
      continue;
    }

    if (!tok.word) {
      ++i;
      continue;
    }

    // Natural-language comparator phrases, case-insensitive, longest first.
    const ComparatorEntry* entry = nullptr;
    for (const auto& e : lexicon.comparators) {
      if (text::match_words(tokens, i, e.words) == 0) continue;
      const auto after = i + e.words.size();
      // Bare "above"/"below" need something to compare against.
      if (after >= tokens.size() || !tokens[after].word) continue;
      entry = &e;
      break;
    }
    if (entry) {
      const auto after = i + entry->words.size();
      ComparatorMatch m;
      m.kind = ComparatorKind::Natural;
      m.surface_op = entry->op;
      m.phrase = {tok.begin, tokens[after - 1].end};
      m.site = m.phrase;
      const auto neg = fold(m, i);
      if (entry->form == ComparatorForm::Adjectival) m.quantity = lexicon.quantity_for(entry->words.front());
      m.subject = find_subject(tokens, i);
      if (m.op) {
        const std::string keyword(keyword_form(*m.op));
        if (neg) {
          const auto& neg_tok = tokens[neg->token];
          std::string prefix;
          std::size_t site_start = neg->aux;
          if (text::iequals(neg_tok.text, "cannot")) prefix = "can";
          std::string between = join_words(tokens, neg->token + 1, i);
          std::string verb;
          if (between.empty() && entry->form != ComparatorForm::Adjectival)
            verb = verb_for_aux(tokens[neg->aux].text);
          else if (neg->aux != neg->token)
            verb = verb_for_aux(tokens[neg->aux].text);
          std::string hint;
          for (const auto& part : {prefix, verb, between, keyword}) {
            if (part.empty()) continue;
            if (!hint.empty()) hint.push_back(' ');
            hint += part;
          }
          m.site = {tokens[site_start].begin, m.phrase.end};
          m.fix_hint = hint;
        } else if (entry->form == ComparatorForm::Verb) {
          m.fix_hint = "be " + keyword;
        } else if (entry->form == ComparatorForm::Verb3) {
          m.fix_hint = "is " + keyword;
        } else {
          m.fix_hint = keyword;
        }
      }
      attach_value(m, tokens, after, lexicon);
      scan.matches.push_back(std::move(m));
      i = after;
      continue;
    }

    // Plain copula directly followed by a value: "is 60 Hz", "be LED".
    if (detail::is_copula(tok.text) && i + 1 < tokens.size()) {
      std::size_t j = i + 1;
      std::optional<std::size_t> neg;
      if (tokens[j].word && detail::is_negation(tokens[j].text)) neg = j++;
      const auto neg_before = find_negation(tokens, i);
      const bool numeric = j < tokens.size() && tokens[j].word &&
                           text::starts_with_digit(tokens[j].text) && !is_ratio_at(tokens, j);
      const bool symbolic = j < tokens.size() && tokens[j].word &&
                            text::starts_upper(tokens[j].text) &&
                            !text::starts_with_digit(tokens[j].text) &&
                            !detail::is_dsl_keyword(tokens[j].text);
      if (numeric || symbolic) {
        ComparatorMatch m;
        m.kind = ComparatorKind::ImplicitEquality;
        m.surface_op = ComparisonOp::Equal;
        m.phrase = {tok.begin, tok.end};
        m.subject = find_subject(tokens, i);
        if (neg) {
          m.negation = Span{tokens[*neg].begin, tokens[*neg].end};
          m.site = {tok.begin, tokens[*neg].end};
        } else if (neg_before) {
          m.negation = Span{tokens[neg_before->token].begin, tokens[neg_before->token].end};
          m.site = {tokens[neg_before->token].begin, tok.end};
        } else {
          m.site = m.phrase;
          m.op = ComparisonOp::Equal;
          if (auto sup = superlative_in(text, m.subject, lexicon)) {
            m.op = sup;
            m.superlative_folded = true;
          }
          m.fix_hint = std::string(tok.text) + " " + std::string(keyword_form(*m.op));
        }
        attach_value(m, tokens, j, lexicon);
        scan.matches.push_back(std::move(m));
        i = j;
        continue;
      }
    }

    // "wider than": a comparative the table does not know.
    if (i + 1 < tokens.size() && text::iequals(tokens[i + 1].text, "than") && tok.text.size() > 3 &&
        text::to_lower(tok.text.substr(tok.text.size() - 2)) == "er" &&
        !in_set(tok.text, {"rather", "other"})) {
      scan.unmapped_comparatives.push_back({tok.begin, tokens[i + 1].end});
      i += 2;
      continue;
    }
    ++i;
  }
  return scan;
}

}  // namespace reqdsl
