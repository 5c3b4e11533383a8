#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/constraints.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/lexicon.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

/// "IF: trigger, THEN: action"
struct IfThenReq {
  std::string trigger;
  std::string action;
  /// Text the request was parsed from; not part of equality.
  std::string raw;

  bool operator==(const IfThenReq& other) const {
    return trigger == other.trigger && action == other.action;
  }
};

struct ParseFailure {
  enum class Kind {
    UnknownKeyword,   // "WHEN:" where "IF:" belongs
    MissingKeyword,   // no "IF:" or no "THEN:"
    EmptyPart,        // blank trigger or action
    RepeatedKeyword,  // a keyword inside the trigger or action
  };

  Kind kind = Kind::MissingKeyword;
  /// The offending keyword ("WHEN:", "THEN:") or part name ("trigger").
  std::string detail;
  Span span;

  std::string message() const;
  bool operator==(const ParseFailure&) const = default;
};

std::string_view to_string(ParseFailure::Kind kind) noexcept;

using IfThenParse = Result<IfThenReq, ParseFailure>;

/// Splits at the first "THEN:" following a leading "IF:". The comma before
/// "THEN:" is optional and trailing periods are not part of the action.
IfThenParse parse_if_then(std::string_view text);

/// Canonical form "IF: t, THEN: a." which parses back to the same parts.
std::string render_if_then(const IfThenReq& req);

std::vector<Diagnostic> check_if_then(std::string_view text,
                                      const Lexicon& lexicon = Lexicon::builtin());
std::vector<Diagnostic> check_modal(std::string_view text,
                                    const Lexicon& lexicon = Lexicon::builtin());
std::vector<Diagnostic> check_expression_keywords(std::string_view text,
                                                  const Lexicon& lexicon = Lexicon::builtin());

std::vector<Diagnostic> check_rule(RuleKind rule, std::string_view text,
                                   const Lexicon& lexicon = Lexicon::builtin());

/// Overall verdict of one rule on a text: the worst non-info severity.
/// If-Then requires at least one conformant trigger-action sentence; the
/// other rules are vacuously conformant when nothing applies.
Severity rule_conformance(RuleKind rule, std::string_view text,
                          const Lexicon& lexicon = Lexicon::builtin());

/// Rules whose transformation applies to the text. Lexicon driven.
std::set<RuleKind> classify(std::string_view text, const Lexicon& lexicon = Lexicon::builtin());

/// Leading "Context:" label such as "Distance Warning:", if any.
std::optional<Span> find_context_prefix(std::string_view sentence);

struct DslDocumentAnalysis {
  std::string requirement_id;
  std::vector<Span> sentences;
  std::map<RuleKind, std::vector<Diagnostic>> per_rule;
  std::optional<IfThenReq> if_then;
  std::vector<Constraint> constraints;
  std::set<RuleKind> classification;

  bool operator==(const DslDocumentAnalysis&) const = default;
};

DslDocumentAnalysis analyze(const Requirement& req, const Lexicon& lexicon = Lexicon::builtin());

/// Applies every fix hint of the rule's diagnostics to the text.
std::string apply_fix_hints(std::string_view text, const std::vector<Diagnostic>& diagnostics);

}  // namespace reqdsl
