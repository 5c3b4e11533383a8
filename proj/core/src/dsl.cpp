#include "reqdsl/dsl.hpp"

#include <algorithm>
#include <cctype>

#include "reqdsl/text.hpp"
#include "wordsets.hpp"

namespace reqdsl {

namespace {

using text::Token;

constexpr std::string_view kIf = "IF:";
constexpr std::string_view kThen = "THEN:";

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string_view strip_trailing(std::string_view s, std::string_view chars) {
  while (!s.empty() && chars.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
  return s;
}

std::size_t offset_of(std::string_view outer, std::string_view inner) {
  return static_cast<std::size_t>(inner.data() - outer.data());
}

// Leading all-caps "WORD:" at the start of `s`, if any.
std::optional<std::size_t> leading_caps_keyword(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= 'A' && s[i] <= 'Z') ++i;
  if (i >= 2 && i < s.size() && s[i] == ':') return i + 1;
  return std::nullopt;
}

// Length of a leading enumerator such as "(a) " or "(1) ".
std::size_t enumerator_length(std::string_view s) {
  if (s.size() < 3 || s.front() != '(') return 0;
  std::size_t i = 1;
  while (i < s.size() && i <= 3 && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 1 || i >= s.size() || s[i] != ')') return 0;
  ++i;
  while (i < s.size() && is_space(s[i])) ++i;
  return i;
}

// Offset into `sentence` where the requirement proper starts, after an
// optional enumerator and "Context:" label.
std::size_t body_offset(std::string_view sentence) {
  std::size_t off = enumerator_length(sentence);
  if (auto ctx = find_context_prefix(sentence.substr(off))) {
    off += ctx->end;
    while (off < sentence.size() && is_space(sentence[off])) ++off;
  }
  return off;
}

std::optional<std::size_t> trigger_marker_length(const std::vector<Token>& tokens,
                                                 const Lexicon& lexicon) {
  for (const auto& words : lexicon.trigger_markers)
    if (auto n = text::match_words(tokens, 0, words)) {
      // "If:" / "IF" are keyword near-misses, not natural trigger clauses.
      if (n < tokens.size() && tokens[n].text == ":") return std::nullopt;
      return n;
    }
  return std::nullopt;
}

// First comma outside parentheses at or after `from`.
std::optional<std::size_t> top_level_comma(std::string_view s, std::size_t from = 0) {
  int depth = 0;
  for (std::size_t i = from; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && depth > 0) --depth;
    if (s[i] == ',' && depth == 0) return i;
  }
  return std::nullopt;
}

Span shift(Span s, std::size_t by) { return {s.begin + by, s.end + by}; }

Diagnostic make(RuleKind rule, Severity sev, Span span, std::string code, std::string message,
                std::optional<std::string> hint = std::nullopt) {
  return {rule, sev, span, std::move(code), std::move(message), std::move(hint)};
}

// Rewrites "When X, Y." into "IF: X, THEN: Y." when the clause boundary is
// unambiguous.
std::optional<std::string> rewrite_trigger_clause(std::string_view body, std::size_t marker_end) {
  const auto rest = body.substr(marker_end);
  const auto comma = top_level_comma(rest);
  if (!comma) return std::nullopt;
  const auto trigger = text::trim(rest.substr(0, *comma));
  auto action = text::trim(rest.substr(*comma + 1));
  const auto action_tokens = text::tokenize(action);
  if (!action_tokens.empty() && text::iequals(action_tokens.front().text, "then"))
    action = text::trim(action.substr(action_tokens.front().end));
  action = strip_trailing(action, ". \t\r\n");
  if (trigger.empty() || action.empty()) return std::nullopt;
  return "IF: " + std::string(trigger) + ", THEN: " + std::string(action) + ".";
}

// "The vehicle warns the driver if the gap is too small": a condition
// trailing the action. Returns the index of the conditional word.
std::optional<std::size_t> trailing_condition(const std::vector<Token>& tokens) {
  int depth = 0;
  for (std::size_t k = 0; k + 1 < tokens.size(); ++k) {
    if (tokens[k].text == "(") ++depth;
    if (tokens[k].text == ")" && depth > 0) --depth;
    if (k > 0 && depth == 0 && detail::in_set(tokens[k].text, {"if", "when", "whenever"}))
      return k;
  }
  return std::nullopt;
}

std::optional<std::string> rewrite_trailing_condition(std::string_view body, const Token& marker) {
  auto action = std::string(strip_trailing(text::trim(body.substr(0, marker.begin)), ", \t"));
  const auto trigger = strip_trailing(text::trim(body.substr(marker.end)), ". \t\r\n");
  if (action.empty() || trigger.empty()) return std::nullopt;
  if (action.size() > 1 && std::isupper(static_cast<unsigned char>(action[0])) &&
      std::islower(static_cast<unsigned char>(action[1])))
    action[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(action[0])));
  return "IF: " + std::string(trigger) + ", THEN: " + action + ".";
}

struct NearMiss {
  std::vector<std::pair<Span, std::string>> fixes;  // span within body, canonical keyword
};

// "If: a, then: b" or "IF a, THEN: b": both keywords present, at least
// one of them recognizably meant as a keyword.
std::optional<NearMiss> keyword_near_miss(std::string_view body) {
  const auto tokens = text::tokenize(body);
  if (tokens.empty() || !text::iequals(tokens[0].text, "if")) return std::nullopt;
  const bool if_colon = tokens.size() > 1 && tokens[1].text == ":";
  const bool if_exact = tokens[0].text == "IF" && if_colon;
  std::optional<std::size_t> then_idx;
  for (std::size_t k = 1; k < tokens.size(); ++k)
    if (text::iequals(tokens[k].text, "then")) {
      then_idx = k;
      break;
    }
  if (!then_idx) return std::nullopt;
  const bool then_colon = *then_idx + 1 < tokens.size() && tokens[*then_idx + 1].text == ":";
  const bool then_exact = tokens[*then_idx].text == "THEN" && then_colon;
  if (if_exact && then_exact) return std::nullopt;
  const bool if_marked = if_colon || tokens[0].text == "IF";
  const bool then_marked = then_colon || tokens[*then_idx].text == "THEN";
  if (!if_marked || !then_marked) return std::nullopt;
  NearMiss nm;
  if (!if_exact)
    nm.fixes.push_back({{tokens[0].begin, if_colon ? tokens[1].end : tokens[0].end},
                        std::string(kIf)});
  if (!then_exact) {
    const auto& t = tokens[*then_idx];
    nm.fixes.push_back({{t.begin, then_colon ? tokens[*then_idx + 1].end : t.end},
                        std::string(kThen)});
  }
  return nm;
}

// Part of a sentence the modal rule applies to: the action of an If-Then
// sentence, the main clause after a leading trigger clause, else all of it.
std::string_view modal_scope(std::string_view body, const Lexicon& lexicon) {
  if (body.substr(0, kIf.size()) == kIf) {
    const auto then = body.find(kThen);
    if (then != std::string_view::npos) return body.substr(then + kThen.size());
    return body;
  }
  const auto tokens = text::tokenize(body);
  if (trigger_marker_length(tokens, lexicon))
    if (auto comma = top_level_comma(body)) return body.substr(*comma + 1);
  return body;
}

std::vector<Diagnostic> check_if_then_sentence(std::string_view text, Span sentence_span,
                                               const Lexicon& lexicon) {
  std::vector<Diagnostic> out;
  const auto sentence = detail::slice(text, sentence_span);
  const auto base = sentence_span.begin;
  const auto enum_len = enumerator_length(sentence);
  if (auto ctx = find_context_prefix(sentence.substr(enum_len)))
    out.push_back(make(RuleKind::IfThen, Severity::Info, shift(*ctx, base + enum_len),
                       "context-prefix", "context label; not treated as a trigger condition"));
  const auto body_off = body_offset(sentence);
  const auto body = sentence.substr(body_off);
  const auto body_base = base + body_off;

  if (body.substr(0, kIf.size()) == kIf) {
    const auto parsed = parse_if_then(body);
    if (parsed) {
      const auto first = text::tokenize(parsed->trigger);
      const bool awkward =
          !first.empty() && (detail::is_leading_preposition(first.front().text) ||
                             trigger_marker_length(first, lexicon).has_value());
      if (awkward)
        out.push_back(make(RuleKind::IfThen, Severity::Minor, sentence_span, "trigger-phrasing",
                           "trigger starts with '" + std::string(first.front().text) +
                               "'; state the condition as a clause"));
      else
        out.push_back(make(RuleKind::IfThen, Severity::Conformant, sentence_span, "if-then",
                           "trigger-action requirement"));
      return out;
    }
    const auto& f = parsed.error();
    const auto sev =
        f.kind == ParseFailure::Kind::RepeatedKeyword ? Severity::Minor : Severity::Violation;
    std::optional<std::string> hint;
    if (f.kind == ParseFailure::Kind::MissingKeyword) {
      // "then:" written in lowercase is a near miss of a present keyword.
      const auto lowered = text::to_lower(body);
      const auto at = lowered.find("then:");
      if (at != std::string::npos) {
        out.push_back(make(RuleKind::IfThen, Severity::Minor,
                           {body_base + at, body_base + at + kThen.size()}, "keyword-case",
                           "keyword must be written 'THEN:'", std::string(kThen)));
        return out;
      }
    }
    out.push_back(make(RuleKind::IfThen, sev, shift(f.span, body_base),
                       std::string(to_string(f.kind)), f.message(), hint));
    return out;
  }

  if (auto kw = leading_caps_keyword(body)) {
    out.push_back(make(RuleKind::IfThen, Severity::Violation, {body_base, body_base + *kw},
                       "unknown-keyword",
                       "unknown keyword '" + std::string(body.substr(0, *kw)) + "'",
                       std::string(kIf)));
    return out;
  }

  if (auto nm = keyword_near_miss(body)) {
    for (const auto& [span, keyword] : nm->fixes)
      out.push_back(make(RuleKind::IfThen, Severity::Minor, shift(span, body_base),
                         "keyword-case", "keyword must be written '" + keyword + "'", keyword));
    return out;
  }

  const auto tokens = text::tokenize(body);
  if (auto n = trigger_marker_length(tokens, lexicon)) {
    const auto marker_end = tokens[*n - 1].end;
    out.push_back(make(RuleKind::IfThen, Severity::Violation, {body_base, sentence_span.end},
                       "trigger-clause",
                       "conditional '" + std::string(body.substr(0, marker_end)) +
                           "' clause not in IF:/THEN: form",
                       rewrite_trigger_clause(body, marker_end)));
  } else if (auto k = trailing_condition(tokens)) {
    out.push_back(make(RuleKind::IfThen, Severity::Violation, {body_base, sentence_span.end},
                       "trigger-clause",
                       "condition '" + std::string(tokens[*k].text) +
                           " ...' follows the action; state it in IF:/THEN: form",
                       rewrite_trailing_condition(body, tokens[*k])));
  }
  return out;
}

struct VerbSite {
  std::size_t index = 0;
  std::string base;
};

bool is_plain_lower_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool ends_plural(std::string_view w) {
  return w.size() > 2 && w.back() == 's' && !w.ends_with("ss") && !w.ends_with("us") &&
         !w.ends_with("is");
}

// Base form of a third-person verb: "flashes" -> "flash", "applies" -> "apply".
std::string verb_base(std::string_view w) {
  if (w == "has") return "have";
  if (w == "does") return "do";
  if (w == "goes") return "go";
  if (w.ends_with("ies") && w.size() > 4) return std::string(w.substr(0, w.size() - 3)) + "y";
  for (std::string_view suffix : {"shes", "ches", "xes", "sses", "zes"})
    if (w.ends_with(suffix)) return std::string(w.substr(0, w.size() - 2));
  return std::string(w.substr(0, w.size() - 1));
}

// Heuristic main verb of a statement without copula or modal: a verb
// following its subject and followed by an object, particle, adverb,
// number or the end of the clause. "The vehicle warns the driver",
// "all indicators flash synchronically".
std::optional<VerbSite> main_verb_site(const std::vector<text::Token>& tokens) {
  auto closes_verb = [&](std::size_t k) {
    if (k >= tokens.size() || !tokens[k].word) return true;
    const auto w = tokens[k].text;
    return detail::is_determiner(w) || detail::is_preposition_or_conjunction(w) ||
           detail::in_set(w, {"up", "down", "off", "out", "all", "every", "each", "any", "its",
                              "their", "automatically"}) ||
           w.ends_with("ly") || text::starts_with_digit(w);
  };
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    const auto prev = tokens[k - 1];
    const auto w = tokens[k].text;
    if (!prev.word || !tokens[k].word || !is_plain_lower_word(w)) continue;
    if (detail::is_determiner(prev.text) || detail::is_preposition_or_conjunction(prev.text) ||
        detail::is_clause_boundary_word(prev.text))
      continue;
    if (detail::is_determiner(w) || detail::is_preposition_or_conjunction(w) ||
        detail::is_clause_boundary_word(w) || detail::is_verb_group_word(w) || w.ends_with("ly"))
      continue;
    if (!closes_verb(k + 1)) continue;
    if (ends_plural(w) && !ends_plural(prev.text)) return VerbSite{k, verb_base(w)};
    if (!w.ends_with('s') && ends_plural(prev.text)) return VerbSite{k, std::string(w)};
  }
  return std::nullopt;
}

std::vector<Diagnostic> check_modal_sentence(std::string_view text, Span sentence_span,
                                             const Lexicon& lexicon) {
  const auto sentence = detail::slice(text, sentence_span);
  const auto body = sentence.substr(body_offset(sentence));
  const auto scope = modal_scope(body, lexicon);
  const auto base = offset_of(text, scope);
  const auto tokens = text::tokenize(scope);
  auto at = [&](std::size_t from, std::size_t to) {
    return Span{base + tokens[from].begin, base + tokens[to - 1].end};
  };

  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].text != "MUST") continue;
    std::size_t end = k + 1;
    if (end < tokens.size() && text::iequals(tokens[end].text, "not")) ++end;
    return {make(RuleKind::ModalVerb, Severity::Conformant, at(k, end), "must",
                 "prescriptive modal present")};
  }
  for (std::size_t k = 0; k < tokens.size(); ++k)
    if (text::iequals(tokens[k].text, "must"))
      return {make(RuleKind::ModalVerb, Severity::Minor, at(k, k + 1), "modal-case",
                   "modal verb must be written 'MUST'", "MUST")};
  for (std::size_t k = 0; k < tokens.size(); ++k)
    for (const auto& m : lexicon.weak_modals)
      if (auto n = text::match_words(tokens, k, m.words))
        return {make(RuleKind::ModalVerb, Severity::Violation, at(k, k + n), "weak-modal",
                     "weak modal '" + std::string(detail::slice(text, at(k, k + n))) +
                         "'; use " + m.replacement,
                     m.replacement)};

  std::size_t words = 0;
  for (const auto& t : text::tokenize(body)) words += t.word ? 1 : 0;
  if (words < 3)
    return {make(RuleKind::ModalVerb, Severity::Info, sentence_span, "not-prescriptive",
                 "too short to judge as a requirement statement")};
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].word && detail::in_set(tokens[k].text, {"is", "are"}))
      return {make(RuleKind::ModalVerb, Severity::Violation, at(k, k + 1), "missing-modal",
                   "statement without modal verb", "MUST be")};
    if (tokens[k].word && detail::in_set(tokens[k].text, {"does", "do"}) && k + 1 < tokens.size() &&
        text::iequals(tokens[k + 1].text, "not"))
      return {make(RuleKind::ModalVerb, Severity::Violation, at(k, k + 1), "missing-modal",
                   "statement without modal verb", "MUST")};
  }
  if (auto v = main_verb_site(tokens))
    return {make(RuleKind::ModalVerb, Severity::Violation, at(v->index, v->index + 1),
                 "missing-modal", "statement without modal verb", "MUST " + v->base)};
  return {make(RuleKind::ModalVerb, Severity::Violation, sentence_span, "missing-modal",
               "statement without modal verb")};
}

Diagnostic empty_text(RuleKind rule) {
  return make(rule, Severity::Violation, {0, 0}, "no-sentence", "no sentence");
}

}  // namespace

std::string_view to_string(ParseFailure::Kind kind) noexcept {
  switch (kind) {
    case ParseFailure::Kind::UnknownKeyword: return "unknown_keyword";
    case ParseFailure::Kind::MissingKeyword: return "missing_keyword";
    case ParseFailure::Kind::EmptyPart: return "empty_part";
    case ParseFailure::Kind::RepeatedKeyword: return "repeated_keyword";
  }
  return "";
}

std::string ParseFailure::message() const {
  switch (kind) {
    case Kind::UnknownKeyword: return "unknown keyword '" + detail + "'";
    case Kind::MissingKeyword: return "missing keyword '" + detail + "'";
    case Kind::EmptyPart: return "empty " + detail;
    case Kind::RepeatedKeyword: return "keyword '" + detail + "' repeated inside a part";
  }
  return detail;
}

IfThenParse parse_if_then(std::string_view input) {
  const auto t = text::trim(input);
  const auto base = offset_of(input, t);
  if (t.substr(0, kIf.size()) != kIf) {
    if (auto kw = leading_caps_keyword(t))
      return ParseFailure{ParseFailure::Kind::UnknownKeyword, std::string(t.substr(0, *kw)),
                          {base, base + *kw}};
    return ParseFailure{ParseFailure::Kind::MissingKeyword, std::string(kIf), {base, base}};
  }
  const auto then = t.find(kThen, kIf.size());
  if (then == std::string_view::npos)
    return ParseFailure{ParseFailure::Kind::MissingKeyword, std::string(kThen),
                        {base + t.size(), base + t.size()}};

  const auto trigger_raw = t.substr(kIf.size(), then - kIf.size());
  const auto action_raw = t.substr(then + kThen.size());
  const auto trigger = strip_trailing(text::trim(trigger_raw), ", \t\r\n.");
  const auto action = strip_trailing(text::trim(action_raw), ". \t\r\n");
  if (trigger.empty())
    return ParseFailure{ParseFailure::Kind::EmptyPart, "trigger",
                        {base + kIf.size(), base + then}};
  if (action.empty())
    return ParseFailure{ParseFailure::Kind::EmptyPart, "action",
                        {base + then + kThen.size(), base + t.size()}};
  for (auto kw : {kIf, kThen}) {
    if (auto at = trigger.find(kw); at != std::string_view::npos) {
      const auto b = offset_of(input, trigger) + at;
      return ParseFailure{ParseFailure::Kind::RepeatedKeyword, std::string(kw), {b, b + kw.size()}};
    }
    if (auto at = action.find(kw); at != std::string_view::npos) {
      const auto b = offset_of(input, action) + at;
      return ParseFailure{ParseFailure::Kind::RepeatedKeyword, std::string(kw), {b, b + kw.size()}};
    }
  }
  return IfThenReq{std::string(trigger), std::string(action), std::string(input)};
}

std::string render_if_then(const IfThenReq& req) {
  return "IF: " + req.trigger + ", THEN: " + req.action + ".";
}

std::optional<Span> find_context_prefix(std::string_view sentence) {
  const auto tokens = text::tokenize(sentence);
  std::size_t k = 0;
  while (k < tokens.size() && k < 5 && tokens[k].word) ++k;
  if (k == 0 || k > 4 || k >= tokens.size() || tokens[k].text != ":") return std::nullopt;
  if (!text::starts_upper(tokens[0].text)) return std::nullopt;
  if (k == 1 && text::is_upper_word(tokens[0].text)) return std::nullopt;
  // "If:" / "Then:" are miscased keywords, not labels.
  if (k == 1 && (text::iequals(tokens[0].text, "if") || text::iequals(tokens[0].text, "then")))
    return std::nullopt;
  for (std::size_t j = 0; j < k; ++j)
    if (detail::is_dsl_keyword(tokens[j].text)) return std::nullopt;
  // Ratios such as "bright to dark 1:1" are not labels.
  if (k + 1 < tokens.size() && tokens[k + 1].begin == tokens[k].end) return std::nullopt;
  return Span{tokens[0].begin, tokens[k].end};
}

std::vector<Diagnostic> check_if_then(std::string_view text, const Lexicon& lexicon) {
  if (text::trim(text).empty()) return {empty_text(RuleKind::IfThen)};
  std::vector<Diagnostic> out;
  for (const auto& s : text::split_sentences(text)) {
    auto diags = check_if_then_sentence(text, s, lexicon);
    out.insert(out.end(), diags.begin(), diags.end());
  }
  return out;
}

std::vector<Diagnostic> check_modal(std::string_view text, const Lexicon& lexicon) {
  if (text::trim(text).empty()) return {empty_text(RuleKind::ModalVerb)};
  std::vector<Diagnostic> out;
  for (const auto& s : text::split_sentences(text)) {
    auto diags = check_modal_sentence(text, s, lexicon);
    out.insert(out.end(), diags.begin(), diags.end());
  }
  return out;
}

std::vector<Diagnostic> check_expression_keywords(std::string_view text, const Lexicon& lexicon) {
  if (text::trim(text).empty()) return {empty_text(RuleKind::Expression)};
  std::vector<Diagnostic> out;
  const auto scan = scan_comparators(text, lexicon);
  for (const auto& m : scan.matches) {
    const auto phrase = std::string(detail::slice(text, m.phrase));
    switch (m.kind) {
      case ComparatorKind::Keyword:
      case ComparatorKind::Symbol:
        if (m.stray)
          out.push_back(make(RuleKind::Expression, Severity::Minor, m.site, "stray-token",
                             "stray '" + std::string(detail::slice(text, *m.stray)) +
                                 "' after keyword",
                             m.fix_hint));
        else
          out.push_back(make(RuleKind::Expression, Severity::Conformant, m.phrase, "keyword",
                             "comparison keyword '" + phrase + "'"));
        break;
      case ComparatorKind::Natural:
        out.push_back(make(RuleKind::Expression, Severity::Violation, m.site, "natural-comparator",
                           m.op ? "natural-language comparator '" + phrase + "'"
                                : "negated equality has no DSL keyword",
                           m.fix_hint));
        break;
      case ComparatorKind::ImplicitEquality:
        out.push_back(make(RuleKind::Expression, Severity::Violation, m.site, "implicit-equality",
                           m.op ? "comparison without keyword"
                                : "negated equality has no DSL keyword",
                           m.fix_hint));
        break;
    }
  }
  for (const auto& span : scan.unmapped_comparatives)
    out.push_back(make(RuleKind::Expression, Severity::Info, span, "unmapped-comparative",
                       "comparative '" + std::string(detail::slice(text, span)) +
                           "' is not in the comparator table"));
  return out;
}

std::vector<Diagnostic> check_rule(RuleKind rule, std::string_view text, const Lexicon& lexicon) {
  switch (rule) {
    case RuleKind::IfThen: return check_if_then(text, lexicon);
    case RuleKind::ModalVerb: return check_modal(text, lexicon);
    case RuleKind::Expression: return check_expression_keywords(text, lexicon);
  }
  return {};
}

Severity rule_conformance(RuleKind rule, std::string_view text, const Lexicon& lexicon) {
  bool any = false;
  Severity worst = Severity::Conformant;
  for (const auto& d : check_rule(rule, text, lexicon)) {
    if (d.severity == Severity::Info) continue;
    any = true;
    if (d.severity == Severity::Violation) return Severity::Violation;
    if (d.severity == Severity::Minor) worst = Severity::Minor;
  }
  if (!any && rule == RuleKind::IfThen) return Severity::Violation;
  return worst;
}

std::set<RuleKind> classify(std::string_view text, const Lexicon& lexicon) {
  std::set<RuleKind> out;
  for (const auto& d : check_if_then(text, lexicon))
    if (d.code == "trigger-clause" || d.code == "unknown-keyword" || d.code == "keyword-case") {
      out.insert(RuleKind::IfThen);
      break;
    }
  if (rule_conformance(RuleKind::ModalVerb, text, lexicon) != Severity::Conformant)
    out.insert(RuleKind::ModalVerb);
  // A bare symbolic equality ("shall be LED") already reads as a constraint;
  // it keeps its diagnostic but does not call for an expression stage.
  for (const auto& m : scan_comparators(text, lexicon).matches)
    if (m.kind == ComparatorKind::Natural ||
        (m.kind == ComparatorKind::ImplicitEquality && m.value && m.value->is_number())) {
      out.insert(RuleKind::Expression);
      break;
    }
  return out;
}

DslDocumentAnalysis analyze(const Requirement& req, const Lexicon& lexicon) {
  DslDocumentAnalysis a;
  a.requirement_id = req.id;
  a.sentences = text::split_sentences(req.text);
  for (auto rule : kAllRules) a.per_rule[rule] = check_rule(rule, req.text, lexicon);
  if (rule_conformance(RuleKind::IfThen, req.text, lexicon) == Severity::Conformant) {
    for (const auto& s : a.sentences) {
      const auto sentence = detail::slice(req.text, s);
      auto parsed = parse_if_then(sentence.substr(body_offset(sentence)));
      if (parsed) {
        a.if_then = *parsed;
        break;
      }
    }
  }
  a.constraints = extract_constraints(req, lexicon);
  a.classification = classify(req.text, lexicon);
  return a;
}

std::string apply_fix_hints(std::string_view text, const std::vector<Diagnostic>& diagnostics) {
  std::vector<const Diagnostic*> edits;
  for (const auto& d : diagnostics)
    if (d.fix_hint && d.severity != Severity::Conformant && d.span.end <= text.size())
      edits.push_back(&d);
  std::stable_sort(edits.begin(), edits.end(),
                   [](const Diagnostic* a, const Diagnostic* b) { return a->span.begin < b->span.begin; });
  std::string out;
  std::size_t pos = 0;
  for (const auto* d : edits) {
    if (d->span.begin < pos) continue;  // overlaps an earlier edit
    out.append(text.substr(pos, d->span.begin - pos));
    out += *d->fix_hint;
    pos = d->span.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace reqdsl
