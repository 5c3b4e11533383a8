#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reqdsl/backend.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/fewshot.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

struct TranslationResult {
  Requirement source;
  RuleKind rule = RuleKind::IfThen;
  /// Text fed to this stage (the previous stage's output in a cascade).
  std::string query;
  std::string output;
  BackendKind backend_kind = BackendKind::Mock;
  std::string support_set_id;
  std::string prompt_hash;
  std::chrono::microseconds latency{0};
};

/// Immutable-after-load lookup of support sets by id, with a default set
/// per (rule, size).
class SupportSetRegistry {
 public:
  SupportSetRegistry() = default;
  explicit SupportSetRegistry(const std::vector<SupportSet>& sets);

  /// Throws Error(DuplicateId).
  void add(SupportSet set);

  const SupportSet* find(std::string_view id) const;
  /// Throws Error(UnknownSupportSet).
  const SupportSet& get(std::string_view id) const;

  /// First set (in insertion order) with the rule and size; without a size,
  /// the largest set for the rule. Throws Error(UnknownSupportSet).
  const SupportSet& default_for(RuleKind rule, std::optional<std::size_t> size = std::nullopt) const;

  const std::vector<SupportSet>& all() const noexcept { return sets_; }

 private:
  std::vector<SupportSet> sets_;
};

using SetSelector = std::function<const SupportSet&(RuleKind)>;

/// Selects explicit ids where given, the registry default otherwise.
SetSelector make_selector(const SupportSetRegistry& registry,
                          std::map<RuleKind, std::string> explicit_ids = {});

/// A backend failure inside a cascade, annotated with the failing stage.
class StageError : public Error {
 public:
  StageError(const Error& cause, std::size_t stage, RuleKind rule);

  /// 1-based position in the cascade.
  std::size_t stage() const noexcept { return stage_; }
  RuleKind rule() const noexcept { return rule_; }

 private:
  std::size_t stage_;
  RuleKind rule_;
};

/// One stage: build the prompt for `query` and generate.
TranslationResult translate_stage(const Requirement& source, std::string_view query, RuleKind rule,
                                  const SupportSet& set, GenerationBackend& backend);

/// Cascade: stage k's output is stage k+1's query. Throws StageError.
std::vector<TranslationResult> translate(const Requirement& req, const std::vector<RuleKind>& rules,
                                         const SetSelector& select, GenerationBackend& backend);

}  // namespace reqdsl
