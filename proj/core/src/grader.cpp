#include "reqdsl/grader.hpp"

#include <algorithm>
#include <set>

#include "reqdsl/constraints.hpp"
#include "reqdsl/dsl.hpp"
#include "reqdsl/text.hpp"
#include "wordsets.hpp"

namespace reqdsl {

GradeClass GradeClass::from_int(int value) {
  if (value < 1 || value > 6)
    throw Error(ErrorCode::UnknownClass, "grade class " + std::to_string(value) + " outside 1..6");
  return GradeClass(value);
}

std::string_view to_string(SyntaxVerdict v) noexcept {
  switch (v) {
    case SyntaxVerdict::Ok: return "ok";
    case SyntaxVerdict::Minor: return "minor";
    case SyntaxVerdict::Grave: return "grave";
  }
  return "";
}

std::string_view to_string(SemanticVerdict v) noexcept {
  switch (v) {
    case SemanticVerdict::Ok: return "ok";
    case SemanticVerdict::Loss: return "loss";
    case SemanticVerdict::Wrong: return "wrong";
  }
  return "";
}

std::string_view to_string(GradeProvenance p) noexcept {
  return p == GradeProvenance::HumanLabel ? "human_label" : "auto";
}

GradeClass combine(SyntaxVerdict syntax, SemanticVerdict semantics) noexcept {
  int c = 1;
  if (semantics == SemanticVerdict::Wrong)
    c = 6;
  else if (syntax == SyntaxVerdict::Grave)
    c = 5;
  else if (syntax == SyntaxVerdict::Ok)
    c = semantics == SemanticVerdict::Ok ? 1 : 3;
  else
    c = semantics == SemanticVerdict::Ok ? 2 : 4;
  return GradeClass::from_int(c);
}

namespace {

using text::Token;

bool inside(std::size_t offset, const std::vector<Span>& spans) {
  return std::any_of(spans.begin(), spans.end(),
                     [&](const Span& s) { return offset >= s.begin && offset < s.end; });
}

std::string stem(std::string w) {
  auto strip = [&](std::string_view suffix, std::size_t min_len) {
    if (w.size() >= min_len && w.size() > suffix.size() &&
        w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0) {
      w.resize(w.size() - suffix.size());
      return true;
    }
    return false;
  };
  if (strip("'s", 3)) return w;
  if (strip("ing", 6)) return w;
  if (strip("ed", 5)) return w;
  if (w.size() > 3 && w.back() == 's' && w[w.size() - 2] != 's') w.pop_back();
  return w;
}

bool is_stopword(std::string_view w) {
  return detail::in_set(w, {"the", "a", "an", "of", "to", "in", "on", "at", "for", "from", "with",
                            "by", "and", "or", "is", "are", "be", "been", "was", "were", "it",
                            "this", "that", "which", "as", "its", "their", "there"});
}

struct TextFacts {
  ComparatorScan scan;
  std::vector<Span> comparator_spans;
  std::size_t free_negations = 0;
  std::set<std::string> numbers;
  std::set<std::string> content;
  std::vector<std::set<std::string>> parentheticals;
};

std::set<std::string> comparator_words(const Lexicon& lexicon) {
  std::set<std::string> out;
  for (const auto& e : lexicon.comparators)
    for (const auto& w : e.words) out.insert(w);
  for (const auto& m : lexicon.weak_modals)
    for (const auto& w : m.words) out.insert(w);
  for (const auto& t : lexicon.trigger_markers)
    for (const auto& w : t) out.insert(w);
  return out;
}

bool is_content_word(const Token& t, const std::set<std::string>& excluded) {
  if (!t.word || text::starts_with_digit(t.text)) return false;
  if (detail::is_dsl_keyword(t.text)) return false;
  const auto lower = text::to_lower(t.text);
  if (is_stopword(lower) || detail::is_verb_group_word(lower) || excluded.count(lower)) return false;
  return !detail::in_set(lower, {"no", "never"});
}

TextFacts facts(std::string_view s, const Lexicon& lexicon) {
  static const auto excluded = comparator_words(Lexicon::builtin());
  const auto& skip = &lexicon == &Lexicon::builtin() ? excluded : comparator_words(lexicon);
  TextFacts f;
  f.scan = scan_comparators(s, lexicon);
  for (const auto& m : f.scan.matches) {
    f.comparator_spans.push_back(m.phrase);
    if (m.negation) f.comparator_spans.push_back(*m.negation);
  }
  const auto tokens = text::tokenize(s);
  const auto enum_end = tokens.size() >= 3 && tokens[0].text == "(" && tokens[2].text == ")" ? 3u : 0u;
  int depth = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& t = tokens[k];
    if (t.text == "(") {
      if (depth++ == 0 && k >= enum_end) f.parentheticals.emplace_back();
      continue;
    }
    if (t.text == ")") {
      if (depth > 0) --depth;
      continue;
    }
    if (k < enum_end) continue;
    if (!t.word) continue;
    if (text::starts_with_digit(t.text)) {
      const auto lexical = std::string(t.text);
      std::size_t n = 0;
      while (n < lexical.size() && (std::isdigit(static_cast<unsigned char>(lexical[n])) || lexical[n] == '.')) ++n;
      f.numbers.insert(lexical.substr(0, n));
      continue;
    }
    if (detail::in_set(t.text, {"not", "never", "cannot", "no"}) && !inside(t.begin, f.comparator_spans))
      ++f.free_negations;
    if (is_content_word(t, skip)) {
      const auto w = stem(text::to_lower(t.text));
      f.content.insert(w);
      if (depth > 0 && !f.parentheticals.empty()) f.parentheticals.back().insert(w);
    }
  }
  return f;
}

std::vector<const ComparatorMatch*> with_op(const ComparatorScan& scan) {
  std::vector<const ComparatorMatch*> out;
  for (const auto& m : scan.matches)
    if (m.op) out.push_back(&m);
  return out;
}

std::string variable_of(std::string_view s, const ComparatorMatch& m, const Lexicon& lexicon) {
  auto v = normalize_variable(detail::slice(s, m.subject), lexicon);
  if (m.quantity && !v.empty()) v += " " + *m.quantity;
  return v;
}

}  // namespace

GradeEvidence evaluate(std::string_view source, std::string_view output, RuleKind rule,
                       const GraderConfig& config, const Lexicon& lexicon) {
  GradeEvidence ev;
  auto note = [&](std::string s) { ev.notes.push_back(std::move(s)); };

  // Syntax.
  const auto out_conf = rule_conformance(rule, output, lexicon);
  const bool identity =
      text::normalize_for_comparison(source) == text::normalize_for_comparison(output);
  if (identity && rule_conformance(rule, source, lexicon) != Severity::Conformant) {
    ev.syntax = SyntaxVerdict::Grave;
    note("syntax: identity mapping of a non-conformant source");
  } else if (out_conf == Severity::Violation) {
    ev.syntax = SyntaxVerdict::Grave;
    note("syntax: rule keywords missing or misplaced");
  } else if (out_conf == Severity::Minor) {
    ev.syntax = SyntaxVerdict::Minor;
    note("syntax: near miss");
  }

  const auto src = facts(source, lexicon);
  const auto out = facts(output, lexicon);

  if (rule == RuleKind::Expression && ev.syntax != SyntaxVerdict::Grave) {
    const bool needed = std::any_of(src.scan.matches.begin(), src.scan.matches.end(), [](const auto& m) {
      return m.kind == ComparatorKind::Natural || m.kind == ComparatorKind::ImplicitEquality;
    });
    const bool has_keyword = std::any_of(out.scan.matches.begin(), out.scan.matches.end(), [](const auto& m) {
      return m.kind == ComparatorKind::Keyword || m.kind == ComparatorKind::Symbol;
    });
    if (needed && !has_keyword) {
      ev.syntax = SyntaxVerdict::Grave;
      note("syntax: comparison keyword absent");
    }
  }

  // Semantics: wrong.
  bool wrong = false;
  if (src.free_negations % 2 != out.free_negations % 2) {
    wrong = true;
    note("semantics: negation parity differs");
  }
  for (const auto& n : src.numbers)
    if (!out.numbers.count(n)) {
      wrong = true;
      note("semantics: number '" + n + "' missing");
    }
  const auto src_ops = with_op(src.scan);
  const auto out_ops = with_op(out.scan);
  bool loss = false;
  for (std::size_t k = 0; k < std::min(src_ops.size(), out_ops.size()); ++k) {
    const auto a = *src_ops[k]->op;
    const auto b = *out_ops[k]->op;
    const auto da = direction(a);
    const auto db = direction(b);
    if (da != db) {
      // A folded superlative ("minimum ... is 5m") may be rendered as a
      // plain equality without changing its meaning.
      const bool tolerated = src_ops[k]->superlative_folded && db == OpDirection::Point;
      if (!tolerated) {
        wrong = true;
        note("semantics: comparison direction changed, " + std::string(math_form(a)) + " became " +
             std::string(math_form(b)));
      }
    } else if (is_strict(a) != is_strict(b)) {
      loss = true;
      note("semantics: strictness changed from " + std::string(math_form(a)) + " to " +
           std::string(math_form(b)));
    }
    const auto va = variable_of(source, *src_ops[k], lexicon);
    const auto vb = variable_of(output, *out_ops[k], lexicon);
    if (!va.empty() && va != vb) {
      loss = true;
      note("semantics: compared variable '" + va + "' became '" + vb + "'");
    }
  }

  // Semantics: loss.
  if (!src.content.empty()) {
    std::size_t kept = 0;
    for (const auto& w : src.content) kept += out.content.count(w);
    const double recall = static_cast<double>(kept) / static_cast<double>(src.content.size());
    if (recall < config.coverage_threshold) {
      loss = true;
      note("semantics: content recall " + std::to_string(recall).substr(0, 4));
    }
  }
  for (const auto& group : src.parentheticals) {
    const bool kept = std::all_of(group.begin(), group.end(),
                                  [&](const std::string& w) { return out.content.count(w) > 0; });
    if (!kept) {
      loss = true;
      note("semantics: parenthetical dropped");
    }
  }

  ev.semantics = wrong ? SemanticVerdict::Wrong : loss ? SemanticVerdict::Loss : SemanticVerdict::Ok;
  return ev;
}

GradedTranslation grade_auto(std::string_view source, std::string_view output, RuleKind rule,
                             const GraderConfig& config, const Lexicon& lexicon) {
  TranslationResult r;
  r.source.text = std::string(source);
  r.rule = rule;
  r.query = std::string(source);
  r.output = std::string(output);
  return grade_auto(r, config, lexicon);
}

GradedTranslation grade_auto(const TranslationResult& result, const GraderConfig& config,
                             const Lexicon& lexicon) {
  const auto ev = evaluate(result.query, result.output, result.rule, config, lexicon);
  GradedTranslation g;
  g.result = result;
  g.grade = combine(ev.syntax, ev.semantics);
  g.provenance = GradeProvenance::Auto;
  g.evidence = ev.notes;
  g.evidence.insert(g.evidence.begin(), "syntax=" + std::string(to_string(ev.syntax)) +
                                            " semantics=" + std::string(to_string(ev.semantics)));
  g.auto_grade = g.grade;
  return g;
}

std::vector<GradedTranslation> ingest_labels(const std::vector<LabelRecord>& records,
                                             const std::vector<TranslationResult>& results) {
  std::vector<GradedTranslation> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    GradedTranslation g;
    g.grade = GradeClass::from_int(rec.human_class);
    g.provenance = GradeProvenance::HumanLabel;
    if (rec.output) {
      g.result.support_set_id = rec.support_set_id;
      g.result.source.text = rec.query;
      g.result.query = rec.query;
      g.result.output = *rec.output;
      g.result.rule = rec.rule.value_or(RuleKind::IfThen);
    } else {
      const auto query = text::collapse_whitespace(rec.query);
      auto it = std::find_if(results.begin(), results.end(), [&](const TranslationResult& r) {
        return r.support_set_id == rec.support_set_id &&
               text::collapse_whitespace(r.query) == query;
      });
      if (it == results.end())
        throw Error(ErrorCode::DanglingReference, "label for set '" + rec.support_set_id +
                                                      "' references no translation of '" +
                                                      rec.query + "'");
      g.result = *it;
    }
    g.evidence.push_back("human label");
    out.push_back(std::move(g));
  }
  return out;
}

void attach_auto_grade(GradedTranslation& target, const GradedTranslation& automatic) {
  target.auto_grade = automatic.grade;
  if (target.provenance == GradeProvenance::Auto) {
    target.grade = automatic.grade;
    target.evidence = automatic.evidence;
  } else {
    target.evidence.insert(target.evidence.end(), automatic.evidence.begin(),
                           automatic.evidence.end());
  }
}

}  // namespace reqdsl
