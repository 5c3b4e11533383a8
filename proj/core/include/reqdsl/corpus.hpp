#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/backend.hpp"
#include "reqdsl/fewshot.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

/// Requirements used as experiment inputs for one rule.
struct TestSet {
  std::string id;
  RuleKind rule = RuleKind::IfThen;
  std::vector<std::string> requirement_ids;

  bool operator==(const TestSet&) const = default;
};

/// In-memory corpus: requirements, support sets, test sets and recorded
/// outputs (which also carry human labels). Ids are unique per kind;
/// recordings are keyed by (support_set_id, query).
class CorpusStore {
 public:
  /// Each add throws Error(DuplicateId) on an id collision.
  void add_requirement(Requirement req);
  void add_support_set(SupportSet set);
  void add_test_set(TestSet set);
  void add_recording(RecordedOutput rec);

  const Requirement* find_requirement(std::string_view id) const;
  const SupportSet* find_support_set(std::string_view id) const;
  const TestSet* find_test_set(std::string_view id) const;
  const RecordedOutput* find_recording(std::string_view support_set_id,
                                       std::string_view query) const;

  /// Throw Error(UnknownId) / Error(UnknownSupportSet).
  const Requirement& get_requirement(std::string_view id) const;
  const SupportSet& get_support_set(std::string_view id) const;
  const TestSet& get_test_set(std::string_view id) const;

  const std::vector<Requirement>& requirements() const noexcept { return requirements_; }
  const std::vector<SupportSet>& support_sets() const noexcept { return support_sets_; }
  const std::vector<TestSet>& test_sets() const noexcept { return test_sets_; }
  const std::vector<RecordedOutput>& recordings() const noexcept { return recordings_; }

  bool operator==(const CorpusStore&) const = default;

 private:
  std::vector<Requirement> requirements_;
  std::vector<SupportSet> support_sets_;
  std::vector<TestSet> test_sets_;
  std::vector<RecordedOutput> recordings_;
};

inline constexpr int kCorpusFormatVersion = 1;

/// Reads `dir/index.json` and the record files it names. Throws
/// MalformedRecordError (file, line, field), Error(DuplicateId),
/// Error(DanglingReference) or Error(Io).
CorpusStore load_corpus(const std::filesystem::path& dir);

/// Writes the corpus as an index plus line-record files. Every file is
/// written to a temporary name and renamed into place.
void save_corpus(const CorpusStore& store, const std::filesystem::path& dir);

/// Reads a recorded-outputs file (one record per line).
std::vector<RecordedOutput> load_recordings(const std::filesystem::path& file);

/// Writes `content` to `path` via a sibling temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace reqdsl
