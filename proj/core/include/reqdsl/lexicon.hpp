#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqdsl/types.hpp"

namespace reqdsl {

enum class ComparatorForm {
  Adjectival,  // follows a copula: "is bigger than"
  Verb,        // "must not exceed"
  Verb3,       // "which exceeds"
};

struct ComparatorEntry {
  std::string phrase;
  std::vector<std::string> words;
  ComparisonOp op = ComparisonOp::Equal;
  ComparatorForm form = ComparatorForm::Adjectival;
};

struct WeakModal {
  std::string phrase;
  std::vector<std::string> words;
  std::string replacement = "MUST";
};

struct UnitEntry {
  std::string surface;
  std::string canonical;
};

struct Superlative {
  std::string marker;
  ComparisonOp op = ComparisonOp::GreaterOrEqual;
};

struct AdjectiveQuantity {
  std::string adjective;
  std::string quantity;
};

/// Configurable word lists driving rule checks and constraint extraction.
/// Phrase lists are kept sorted longest-first so scans prefer the longest
/// match.
struct Lexicon {
  std::vector<WeakModal> weak_modals;
  std::vector<std::vector<std::string>> trigger_markers;
  std::vector<ComparatorEntry> comparators;
  std::vector<UnitEntry> units;
  std::vector<AdjectiveQuantity> adjectives;
  std::vector<Superlative> superlatives;
  std::vector<std::string> possessors;

  /// Lexicon compiled from the bundled data files.
  static const Lexicon& builtin();

  /// Reads the lexicon files from `dir`; any file that is absent falls
  /// back to its bundled counterpart. Throws Error(InvalidConfig) on
  /// malformed lines.
  static Lexicon load(const std::filesystem::path& dir);

  /// Parses one lexicon file by name ("units.tsv", ...) into this lexicon.
  void apply_file(std::string_view name, std::string_view content);

  const UnitEntry* find_unit(std::string_view surface) const;
  std::optional<std::string> quantity_for(std::string_view adjective) const;
  std::optional<ComparisonOp> superlative_op(std::string_view word) const;
  bool is_possessor(std::string_view lower_word) const;
};

inline constexpr std::string_view kLexiconFileNames[] = {
    "weak_modals.txt", "trigger_markers.txt", "comparators.tsv",
    "adjectives.tsv",  "units.tsv",           "superlatives.tsv",
    "possessors.txt"};

}  // namespace reqdsl
