#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reqdsl/backend.hpp"
#include "reqdsl/corpus.hpp"
#include "reqdsl/grader.hpp"

namespace reqdsl {

enum class GradingMode { Auto, Labels, Both };

std::string_view to_string(GradingMode mode) noexcept;
std::optional<GradingMode> parse_grading_mode(std::string_view name);

struct ExperimentSpec {
  std::string name;
  RuleKind rule = RuleKind::IfThen;
  std::string support_set_id;
  std::string test_set_id;
  GenerationBackendConfig backend;
  GradingMode grading = GradingMode::Labels;
};

/// Reads a spec file. Throws Error(InvalidConfig) or Error(Io).
ExperimentSpec load_experiment_spec(const std::filesystem::path& file);

/// Checks the spec against the corpus: ids exist, the rules agree and no
/// test requirement appears in the support set. Throws Error
/// (UnknownSupportSet, UnknownId, InvalidConfig or DisjointnessViolation).
void validate_experiment(const ExperimentSpec& spec, const CorpusStore& corpus);

struct ClassHistogram {
  std::array<std::size_t, 6> counts{};
  std::size_t total = 0;
  /// Rows whose backend call failed; not part of `total`.
  std::size_t failed = 0;

  void add(GradeClass grade) noexcept;
  std::size_t count(GradeClass grade) const noexcept;
  bool conserved() const noexcept;
  bool operator==(const ClassHistogram&) const = default;
};

struct RowFailure {
  std::size_t row = 0;
  std::string requirement_id;
  ErrorCode code = ErrorCode::TransportError;
  std::string message;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::size_t support_size = 0;
  std::optional<std::string> support_label;
  std::vector<GradedTranslation> rows;
  std::vector<RowFailure> failures;
  ClassHistogram histogram;
  /// Fraction of labelled rows where the auto grade equals the label
  /// (grading=both only).
  std::optional<double> agreement;
};

/// Runs every test requirement through prompt, backend and grading. Rows
/// may run concurrently up to the backend config's max_parallel; results
/// keep test-set order. `backend` overrides the one the spec describes.
ExperimentResult run_experiment(const ExperimentSpec& spec, const CorpusStore& corpus,
                                GenerationBackend* backend = nullptr,
                                const GraderConfig& grader = {});

enum class ReportFormat { TableText, Machine };

std::string emit_report(const std::vector<ExperimentResult>& results, ReportFormat format);

}  // namespace reqdsl
