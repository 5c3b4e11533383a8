#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqdsl {

enum class RuleKind { IfThen, ModalVerb, Expression };

inline constexpr std::array<RuleKind, 3> kAllRules = {
    RuleKind::IfThen, RuleKind::ModalVerb, RuleKind::Expression};

/// Stable machine name: "if_then", "modal_verb", "expression".
std::string_view to_string(RuleKind rule) noexcept;
/// Human heading as used in report tables.
std::string_view display_name(RuleKind rule) noexcept;
/// Accepts the machine names plus a few common spellings ("ifthen", "modal").
std::optional<RuleKind> parse_rule_kind(std::string_view name);

enum class RequirementSource { Legacy, Dsl, Generated };

std::string_view to_string(RequirementSource source) noexcept;
std::optional<RequirementSource> parse_requirement_source(std::string_view name);

struct Requirement {
  std::string id;
  std::string text;
  RequirementSource source = RequirementSource::Legacy;
  std::vector<std::string> tags;

  bool operator==(const Requirement&) const = default;
};

/// Text must be non-empty after trimming.
bool has_valid_text(const Requirement& req);

enum class ComparisonOp { Less, LessOrEqual, Greater, GreaterOrEqual, Equal };

inline constexpr std::array<ComparisonOp, 5> kAllOps = {
    ComparisonOp::Less, ComparisonOp::LessOrEqual, ComparisonOp::Greater,
    ComparisonOp::GreaterOrEqual, ComparisonOp::Equal};

/// "LESS", "LESS OR EQUAL", "GREATER", "GREATER OR EQUAL", "EQUAL".
std::string_view keyword_form(ComparisonOp op) noexcept;
/// "<", "<=", ">", ">=", "=".
std::string_view math_form(ComparisonOp op) noexcept;
/// Machine name: "less", "less_or_equal", ...
std::string_view to_string(ComparisonOp op) noexcept;

std::optional<ComparisonOp> op_from_keyword(std::string_view keyword);
/// Also accepts the unicode forms of <= and >=.
std::optional<ComparisonOp> op_from_math(std::string_view symbol);
std::optional<ComparisonOp> parse_comparison_op(std::string_view name);

/// Logical complement. Equal has none: the DSL has no NOT EQUAL keyword.
std::optional<ComparisonOp> negate(ComparisonOp op) noexcept;

enum class OpDirection { Down, Up, Point };
OpDirection direction(ComparisonOp op) noexcept;
bool is_strict(ComparisonOp op) noexcept;

/// Half-open byte range into UTF-8 text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return begin == end; }
  bool operator==(const Span&) const = default;
};

enum class Severity { Conformant, Minor, Violation, Info };

std::string_view to_string(Severity severity) noexcept;
std::optional<Severity> parse_severity(std::string_view name);

struct Diagnostic {
  RuleKind rule = RuleKind::IfThen;
  Severity severity = Severity::Conformant;
  Span span;
  std::string code;
  std::string message;
  std::optional<std::string> fix_hint;

  bool operator==(const Diagnostic&) const = default;
};

}  // namespace reqdsl
