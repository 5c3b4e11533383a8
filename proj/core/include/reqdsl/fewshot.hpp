#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/lexicon.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

struct SupportPair {
  std::string input;
  std::string dsl;

  bool operator==(const SupportPair&) const = default;
};

enum class SupportProvenance { PaperFixture, User };

std::string_view to_string(SupportProvenance p) noexcept;
std::optional<SupportProvenance> parse_support_provenance(std::string_view name);

/// Ordered few-shot examples for one rule. Order matters: it is the order
/// in which pairs appear in the prompt.
struct SupportSet {
  std::string id;
  RuleKind rule = RuleKind::IfThen;
  std::vector<SupportPair> pairs;
  SupportProvenance provenance = SupportProvenance::User;
  /// Free-form display label, e.g. "1 (trained on keyword: equal)".
  std::optional<std::string> label;

  std::size_t size() const noexcept { return pairs.size(); }
  bool operator==(const SupportSet&) const = default;
};

/// Bumped whenever the prompt layout changes.
inline constexpr int kPromptTemplateVersion = 1;

inline constexpr std::string_view kInstructionLine = "Translate input to DSL";
inline constexpr std::string_view kPairSeparator = "\n###\n";

/// Throws Error(EmptySupportSet) for a set without pairs and
/// Error(InvalidSupportSet) when a pair is blank or its DSL side is not
/// conformant under the set's rule.
void validate_support_set(const SupportSet& set, const Lexicon& lexicon = Lexicon::builtin());

/// Byte-exact few-shot prompt. Throws Error(EmptySupportSet).
std::string build_prompt(const SupportSet& set, std::string_view query);

/// Hex SHA-256 of the prompt bytes.
std::string prompt_hash(std::string_view prompt);

/// Deterministic stand-in for a model: applies the rule's fix hints.
/// Returns the input unchanged when there is nothing to rewrite.
std::string mock_translate(RuleKind rule, std::string_view text,
                           const Lexicon& lexicon = Lexicon::builtin());

}  // namespace reqdsl
