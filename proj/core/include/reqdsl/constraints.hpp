#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/lexicon.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

struct ConstraintValue {
  enum class Kind { Number, Symbol };

  Kind kind = Kind::Number;
  double number = 0.0;
  /// Lexical form: "3.5", "300", "LED".
  std::string text;

  static ConstraintValue make_number(std::string lexical);
  static ConstraintValue make_symbol(std::string symbol);

  bool is_number() const noexcept { return kind == Kind::Number; }
  bool operator==(const ConstraintValue&) const = default;
};

// ---------------------------------------------------------------------------
// Comparator scanning
// ---------------------------------------------------------------------------

enum class ComparatorKind {
  Keyword,           // LESS, GREATER OR EQUAL, ...
  Symbol,            // <, <=, ...
  Natural,           // "bigger than", "must not exceed"
  ImplicitEquality,  // copula followed directly by a value: "is 60 Hz"
};

/// One comparison site found in a text.
///
/// `phrase` is the comparator itself. `site` is the text a fix hint
/// replaces; for negated natural phrases it also covers the negation and
/// any auxiliary ("does not exceed"). `op` is the operator after negation
/// and superlative folding; it is empty when a negated equality cannot be
/// expressed in the DSL.
struct ComparatorMatch {
  ComparatorKind kind = ComparatorKind::Natural;
  Span phrase;
  Span site;
  std::optional<Span> negation;
  std::optional<Span> stray;
  ComparisonOp surface_op = ComparisonOp::Equal;
  std::optional<ComparisonOp> op;
  Span subject;
  std::optional<std::string> quantity;
  bool superlative_folded = false;
  /// Number or symbol following the comparator, with its unit if any.
  std::optional<ConstraintValue> value;
  std::optional<std::string> unit;
  std::optional<Span> value_span;
  std::optional<std::string> fix_hint;
};

struct ComparatorScan {
  std::vector<ComparatorMatch> matches;
  /// "wider than" style comparatives missing from the comparator table.
  std::vector<Span> unmapped_comparatives;
};

ComparatorScan scan_comparators(std::string_view text,
                                const Lexicon& lexicon = Lexicon::builtin());

// ---------------------------------------------------------------------------
// Constraints
// ---------------------------------------------------------------------------

struct Constraint {
  std::string variable;
  ComparisonOp op = ComparisonOp::Equal;
  ConstraintValue value;
  std::optional<std::string> unit;
  std::string source_requirement;
  Span span;

  bool operator==(const Constraint&) const = default;
};

struct Extraction {
  std::vector<Constraint> constraints;
  std::vector<Diagnostic> diagnostics;
};

/// Lowercases, drops determiners, possessors and superlative markers, and
/// collapses whitespace: "The vehicles horn" -> "horn".
std::string normalize_variable(std::string_view raw,
                               const Lexicon& lexicon = Lexicon::builtin());

Extraction extract_constraints_detailed(const Requirement& req,
                                        const Lexicon& lexicon = Lexicon::builtin());

std::vector<Constraint> extract_constraints(const Requirement& req,
                                            const Lexicon& lexicon = Lexicon::builtin());

enum class FormulaStyle { Keyword, Mathematical };

/// "horn loudness <= 50dB" or "speeding velocity GREATER 10km/h".
std::string render_formula(const Constraint& c, FormulaStyle style);

/// Value with its unit as written in formulas ("10km/h", "1 second").
std::string render_value(const Constraint& c);

// ---------------------------------------------------------------------------
// Consistency
// ---------------------------------------------------------------------------

enum class FindingKind { Contradiction, Link, UnitMismatch };

std::string_view to_string(FindingKind kind) noexcept;

struct ConsistencyFinding {
  FindingKind kind = FindingKind::Link;
  std::string variable;
  std::vector<Constraint> constraints;
  std::string explanation;
};

/// Numeric feasible set of a group of constraints as one interval.
struct Interval {
  std::optional<double> lower;
  bool lower_open = false;
  std::optional<double> upper;
  bool upper_open = false;

  bool empty() const noexcept;
  bool contains(double x) const noexcept;
};

/// Intersection of the half-lines/points described by numeric constraints.
Interval feasible_interval(const std::vector<Constraint>& numeric);

/// Groups by (variable, unit); every group holding constraints from at
/// least two requirements yields a Contradiction or Link. Different units
/// on one variable yield a UnitMismatch instead of a comparison.
std::vector<ConsistencyFinding> check_consistency(const std::vector<Constraint>& constraints);

}  // namespace reqdsl
