#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/lexicon.hpp"
#include "reqdsl/translate.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

/// One of the six quality classes. Categorical: only equality is defined.
class GradeClass {
 public:
  /// Throws Error(UnknownClass) outside 1..6.
  static GradeClass from_int(int value);

  int value() const noexcept { return value_; }
  bool operator==(const GradeClass&) const = default;

 private:
  explicit GradeClass(int value) : value_(value) {}
  int value_;
};

enum class SyntaxVerdict { Ok, Minor, Grave };
enum class SemanticVerdict { Ok, Loss, Wrong };

std::string_view to_string(SyntaxVerdict v) noexcept;
std::string_view to_string(SemanticVerdict v) noexcept;

/// (ok,ok)->1, (minor,ok)->2, (ok,loss)->3, (minor,loss)->4,
/// (grave,not wrong)->5, (any,wrong)->6.
GradeClass combine(SyntaxVerdict syntax, SemanticVerdict semantics) noexcept;

struct GradeEvidence {
  SyntaxVerdict syntax = SyntaxVerdict::Ok;
  SemanticVerdict semantics = SemanticVerdict::Ok;
  /// Which checks fired, e.g. "semantics: number '5' missing".
  std::vector<std::string> notes;
};

enum class GradeProvenance { HumanLabel, Auto };

std::string_view to_string(GradeProvenance p) noexcept;

struct GradedTranslation {
  TranslationResult result;
  GradeClass grade = GradeClass::from_int(1);
  GradeProvenance provenance = GradeProvenance::Auto;
  std::vector<std::string> evidence;
  /// Auto grade kept alongside a human label; never replaces it.
  std::optional<GradeClass> auto_grade;
};

struct GraderConfig {
  /// Minimum content-word recall of the source in the output.
  double coverage_threshold = 0.85;
};

GradeEvidence evaluate(std::string_view source, std::string_view output, RuleKind rule,
                       const GraderConfig& config = {},
                       const Lexicon& lexicon = Lexicon::builtin());

GradedTranslation grade_auto(std::string_view source, std::string_view output, RuleKind rule,
                             const GraderConfig& config = {},
                             const Lexicon& lexicon = Lexicon::builtin());

/// Grades an existing translation result.
GradedTranslation grade_auto(const TranslationResult& result, const GraderConfig& config = {},
                             const Lexicon& lexicon = Lexicon::builtin());

/// A human label. Without an inline output it must reference a result by
/// (support_set_id, query).
struct LabelRecord {
  std::string support_set_id;
  std::string query;
  std::optional<std::string> output;
  std::optional<RuleKind> rule;
  int human_class = 0;
};

/// Throws Error(UnknownClass) or Error(DanglingReference).
std::vector<GradedTranslation> ingest_labels(const std::vector<LabelRecord>& records,
                                             const std::vector<TranslationResult>& results = {});

/// Attaches an auto grade to a graded translation. Human labels keep their
/// grade; auto-graded entries take the new one.
void attach_auto_grade(GradedTranslation& target, const GradedTranslation& automatic);

}  // namespace reqdsl
