#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "reqdsl/dsl.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/lexicon.hpp"
#include "reqdsl/text.hpp"
#include "support.hpp"

using namespace reqdsl;

TEST_SUITE("lexicon") {
  TEST_CASE("builtin lexicon carries the core tables") {
    const auto& lex = Lexicon::builtin();
    CHECK(lex.find_unit("km/h") != nullptr);
    CHECK(lex.find_unit("dB") != nullptr);
    CHECK(lex.find_unit("parsec") == nullptr);
    CHECK(lex.quantity_for("louder") == std::optional<std::string>("loudness"));
    CHECK(lex.superlative_op("minimun") == std::optional<ComparisonOp>(ComparisonOp::GreaterOrEqual));
    CHECK(lex.superlative_op("maximum") == std::optional<ComparisonOp>(ComparisonOp::LessOrEqual));
    CHECK(lex.is_possessor("vehicle"));
    CHECK_FALSE(lex.is_possessor("brake"));
  }

  TEST_CASE("phrase lists are sorted longest first") {
    const auto& lex = Lexicon::builtin();
    for (std::size_t i = 1; i < lex.comparators.size(); ++i)
      CHECK(lex.comparators[i - 1].words.size() >= lex.comparators[i].words.size());
    for (std::size_t i = 1; i < lex.weak_modals.size(); ++i)
      CHECK(lex.weak_modals[i - 1].words.size() >= lex.weak_modals[i].words.size());
  }

  TEST_CASE("load overrides only the files present") {
    const auto dir = testing::scratch_dir("lexicon");
    std::ofstream(dir / "weak_modals.txt") << "# custom\nought to\n";
    std::ofstream(dir / "comparators.tsv") << "wider than\t>\tadjectival\n";
    const auto lex = Lexicon::load(dir);
    REQUIRE(lex.weak_modals.size() == 1);
    CHECK(lex.weak_modals[0].phrase == "ought to");
    CHECK(lex.units.size() == Lexicon::builtin().units.size());

    const std::string s = "The lane ought to be wider than 3m.";
    CHECK(rule_conformance(RuleKind::ModalVerb, s, lex) == Severity::Violation);
    CHECK(rule_conformance(RuleKind::Expression, s, lex) == Severity::Violation);
    CHECK(rule_conformance(RuleKind::Expression, s) != Severity::Violation);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("malformed lexicon lines raise InvalidConfig") {
    Lexicon lex = Lexicon::builtin();
    auto code_of = [&](std::string_view name, std::string_view content) {
      try {
        lex.apply_file(name, content);
      } catch (const Error& e) {
        return std::optional<ErrorCode>(e.code());
      }
      return std::optional<ErrorCode>();
    };
    CHECK(code_of("comparators.tsv", "bigger than\n") == ErrorCode::InvalidConfig);
    CHECK(code_of("comparators.tsv", "bigger than\t>>\n") == ErrorCode::InvalidConfig);
    CHECK(code_of("comparators.tsv", "bigger than\t>\tnoun\n") == ErrorCode::InvalidConfig);
    CHECK(code_of("superlatives.tsv", "minimum\n") == ErrorCode::InvalidConfig);
    CHECK(code_of("adjectives.tsv", "louder\n") == ErrorCode::InvalidConfig);
    CHECK(code_of("colors.txt", "red\n") == ErrorCode::InvalidConfig);
  }
}

TEST_SUITE("text") {
  TEST_CASE("normalize_for_comparison") {
    CHECK(text::normalize_for_comparison("  The  light is on.  ") == "The light is on");
    CHECK(text::normalize_for_comparison("a\tb!") == "a b");
  }

  TEST_CASE("word helpers") {
    CHECK(text::is_upper_word("LESS"));
    CHECK_FALSE(text::is_upper_word("Less"));
    CHECK_FALSE(text::is_upper_word("10"));
    CHECK(text::iequals("THEN", "then"));
    CHECK(text::starts_with_digit("5m"));
    CHECK(text::phrase_words("Bigger  Than") == std::vector<std::string>{"bigger", "than"});
    const auto toks = text::tokenize("is bigger than 5");
    CHECK(text::match_words(toks, 1, {"bigger", "than"}) == 2);
    CHECK(text::match_words(toks, 0, {"bigger", "than"}) == 0);
  }
}
