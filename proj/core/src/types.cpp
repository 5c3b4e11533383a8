#include "reqdsl/types.hpp"

#include "reqdsl/error.hpp"
#include "reqdsl/text.hpp"

namespace reqdsl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptySupportSet: return "empty_support_set";
    case ErrorCode::InvalidSupportSet: return "invalid_support_set";
    case ErrorCode::UnknownSupportSet: return "unknown_set";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::TransportError: return "transport_error";
    case ErrorCode::BackendRejected: return "backend_rejected";
    case ErrorCode::ReplayMiss: return "replay_miss";
    case ErrorCode::MalformedRecord: return "malformed_record";
    case ErrorCode::DuplicateId: return "duplicate_id";
    case ErrorCode::UnknownId: return "unknown_id";
    case ErrorCode::UnknownClass: return "unknown_class";
    case ErrorCode::DanglingReference: return "dangling_reference";
    case ErrorCode::DisjointnessViolation: return "disjointness_violation";
    case ErrorCode::InvalidConfig: return "invalid_config";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

MalformedRecordError::MalformedRecordError(std::string file, std::size_t line, std::string field,
                                           const std::string& reason)
    : Error(ErrorCode::MalformedRecord,
            file + ":" + std::to_string(line) + ": " +
                (field.empty() ? reason : "field '" + field + "': " + reason)),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

std::string_view to_string(RuleKind rule) noexcept {
  switch (rule) {
    case RuleKind::IfThen: return "if_then";
    case RuleKind::ModalVerb: return "modal_verb";
    case RuleKind::Expression: return "expression";
  }
  return "if_then";
}

std::string_view display_name(RuleKind rule) noexcept {
  switch (rule) {
    case RuleKind::IfThen: return "If-Then";
    case RuleKind::ModalVerb: return "Modal verbs";
    case RuleKind::Expression: return "Expressions";
  }
  return "";
}

std::optional<RuleKind> parse_rule_kind(std::string_view name) {
  const std::string n = text::to_lower(name);
  if (n == "if_then" || n == "ifthen" || n == "if-then") return RuleKind::IfThen;
  if (n == "modal_verb" || n == "modal" || n == "modalverb" || n == "modal-verb")
    return RuleKind::ModalVerb;
  if (n == "expression" || n == "expressions" || n == "expr") return RuleKind::Expression;
  return std::nullopt;
}

std::string_view to_string(RequirementSource source) noexcept {
  switch (source) {
    case RequirementSource::Legacy: return "legacy";
    case RequirementSource::Dsl: return "dsl";
    case RequirementSource::Generated: return "generated";
  }
  return "legacy";
}

std::optional<RequirementSource> parse_requirement_source(std::string_view name) {
  if (name == "legacy") return RequirementSource::Legacy;
  if (name == "dsl") return RequirementSource::Dsl;
  if (name == "generated") return RequirementSource::Generated;
  return std::nullopt;
}

bool has_valid_text(const Requirement& req) { return !text::trim(req.text).empty(); }

std::string_view keyword_form(ComparisonOp op) noexcept {
  switch (op) {
    case ComparisonOp::Less: return "LESS";
    case ComparisonOp::LessOrEqual: return "LESS OR EQUAL";
    case ComparisonOp::Greater: return "GREATER";
    case ComparisonOp::GreaterOrEqual: return "GREATER OR EQUAL";
    case ComparisonOp::Equal: return "EQUAL";
  }
  return "";
}

std::string_view math_form(ComparisonOp op) noexcept {
  switch (op) {
    case ComparisonOp::Less: return "<";
    case ComparisonOp::LessOrEqual: return "<=";
    case ComparisonOp::Greater: return ">";
    case ComparisonOp::GreaterOrEqual: return ">=";
    case ComparisonOp::Equal: return "=";
  }
  return "";
}

std::string_view to_string(ComparisonOp op) noexcept {
  switch (op) {
    case ComparisonOp::Less: return "less";
    case ComparisonOp::LessOrEqual: return "less_or_equal";
    case ComparisonOp::Greater: return "greater";
    case ComparisonOp::GreaterOrEqual: return "greater_or_equal";
    case ComparisonOp::Equal: return "equal";
  }
  return "";
}

std::optional<ComparisonOp> op_from_keyword(std::string_view keyword) {
  for (auto op : kAllOps)
    if (keyword_form(op) == keyword) return op;
  return std::nullopt;
}

std::optional<ComparisonOp> op_from_math(std::string_view symbol) {
  for (auto op : kAllOps)
    if (math_form(op) == symbol) return op;
  if (symbol == "\xE2\x89\xA4") return ComparisonOp::LessOrEqual;     // U+2264
  if (symbol == "\xE2\x89\xA5") return ComparisonOp::GreaterOrEqual;  // U+2265
  return std::nullopt;
}

std::optional<ComparisonOp> parse_comparison_op(std::string_view name) {
  for (auto op : kAllOps)
    if (to_string(op) == name) return op;
  if (auto op = op_from_math(name)) return op;
  return op_from_keyword(name);
}

std::optional<ComparisonOp> negate(ComparisonOp op) noexcept {
  switch (op) {
    case ComparisonOp::Less: return ComparisonOp::GreaterOrEqual;
    case ComparisonOp::GreaterOrEqual: return ComparisonOp::Less;
    case ComparisonOp::Greater: return ComparisonOp::LessOrEqual;
    case ComparisonOp::LessOrEqual: return ComparisonOp::Greater;
    case ComparisonOp::Equal: return std::nullopt;
  }
  return std::nullopt;
}

OpDirection direction(ComparisonOp op) noexcept {
  switch (op) {
    case ComparisonOp::Less:
    case ComparisonOp::LessOrEqual: return OpDirection::Down;
    case ComparisonOp::Greater:
    case ComparisonOp::GreaterOrEqual: return OpDirection::Up;
    case ComparisonOp::Equal: return OpDirection::Point;
  }
  return OpDirection::Point;
}

bool is_strict(ComparisonOp op) noexcept {
  return op == ComparisonOp::Less || op == ComparisonOp::Greater;
}

std::string_view to_string(Severity severity) noexcept {
  switch (severity) {
    case Severity::Conformant: return "conformant";
    case Severity::Minor: return "minor";
    case Severity::Violation: return "violation";
    case Severity::Info: return "info";
  }
  return "";
}

std::optional<Severity> parse_severity(std::string_view name) {
  for (auto s : {Severity::Conformant, Severity::Minor, Severity::Violation, Severity::Info})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

}  // namespace reqdsl
