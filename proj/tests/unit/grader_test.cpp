#include <doctest.h>

#include <algorithm>
#include <functional>

#include "reqdsl/dsl.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/grader.hpp"
#include "reqdsl/text.hpp"
#include "support.hpp"

using namespace reqdsl;

namespace {

RuleKind rule_of(const RecordedOutput& rec) {
  return testing::paper_corpus().get_support_set(rec.support_set_id).rule;
}

bool is_identity(const RecordedOutput& rec) {
  return text::normalize_for_comparison(rec.output) == text::normalize_for_comparison(rec.query);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("grader") {
  TEST_CASE("matrix covers all nine cells") {
    const SyntaxVerdict syn[] = {SyntaxVerdict::Ok, SyntaxVerdict::Minor, SyntaxVerdict::Grave};
    const SemanticVerdict sem[] = {SemanticVerdict::Ok, SemanticVerdict::Loss, SemanticVerdict::Wrong};
    // Rows: syntax; columns: semantics.
    const int expected[3][3] = {{1, 3, 6}, {2, 4, 6}, {5, 5, 6}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(combine(syn[i], sem[j]).value() == expected[i][j]);
  }

  TEST_CASE("GradeClass accepts 1..6 only") {
    for (int v = 1; v <= 6; ++v) CHECK(GradeClass::from_int(v).value() == v);
    CHECK(code_of([] { GradeClass::from_int(0); }) == ErrorCode::UnknownClass);
    CHECK(code_of([] { GradeClass::from_int(7); }) == ErrorCode::UnknownClass);
  }

  TEST_CASE("dropped parenthetical is a semantic loss") {
    const auto g = grade_auto(
        "With activated darkness switch (only armored vehicles) the cornering light is not activated.",
        "IF: darkness switch is activated, THEN: cornering light is not activated", RuleKind::IfThen);
    CHECK(g.grade.value() == 3);
    CHECK(g.provenance == GradeProvenance::Auto);
    CHECK_FALSE(g.evidence.empty());
  }

  TEST_CASE("identity mapping on a non-conformant source is class 5") {
    const std::string s = "Low beam illuminant shall be LED.";
    CHECK(grade_auto(s, s, RuleKind::ModalVerb).grade.value() == 5);
    const std::string ok = "The lamp MUST be red.";
    CHECK(grade_auto(ok, ok, RuleKind::ModalVerb).grade.value() == 1);
  }

  TEST_CASE("superlative source rendered with the opposite bound is class 6") {
    const auto g = grade_auto("The minimun distance to a vehicle in front has to be 5m.",
                              "The minimun distance to a vehicle in front has to be LESS OR EQUAL 5m.",
                              RuleKind::Expression);
    CHECK(g.grade.value() == 6);
    CHECK(std::any_of(g.evidence.begin(), g.evidence.end(),
                      [](const std::string& e) { return e.find("direction") != std::string::npos; }));
  }

  TEST_CASE("negation parity and numbers") {
    CHECK(grade_auto("The lamp shall not be red.", "The lamp MUST be red.", RuleKind::ModalVerb).grade.value() == 6);
    CHECK(grade_auto("The gap shall be 5m.", "The gap MUST be 6m.", RuleKind::ModalVerb).grade.value() == 6);
    CHECK(grade_auto("The gap shall be 5m.", "The gap MUST be 5m.", RuleKind::ModalVerb).grade.value() == 1);
  }

  TEST_CASE("near misses grade as 2") {
    CHECK(grade_auto("The lamp shall be red.", "The lamp must be red.", RuleKind::ModalVerb).grade.value() == 2);
    CHECK(grade_auto("If the lamp is on, the buzzer sounds.", "IF: the lamp is on, then: the buzzer sounds.",
                     RuleKind::IfThen)
              .grade.value() == 2);
  }

  TEST_CASE("grade_auto on a translation result keeps the result") {
    TranslationResult r;
    r.source = Requirement{"m1", "Low beam illuminant shall be LED.", RequirementSource::Legacy, {}};
    r.rule = RuleKind::ModalVerb;
    r.query = r.source.text;
    r.output = "Low beam illuminant MUST be LED.";
    const auto g = grade_auto(r);
    CHECK(g.grade.value() == 1);
    CHECK(g.result.output == r.output);
    REQUIRE(g.auto_grade.has_value());
    CHECK(g.auto_grade->value() == 1);
  }

  TEST_CASE("ingest_labels") {
    CHECK(ingest_labels({}).empty());

    LabelRecord inline_rec{"modal-1", "Low beam illuminant shall be LED.", "Low beam illuminant shall be LED.",
                           RuleKind::ModalVerb, 5};
    auto graded = ingest_labels({inline_rec});
    REQUIRE(graded.size() == 1);
    CHECK(graded[0].grade.value() == 5);
    CHECK(graded[0].provenance == GradeProvenance::HumanLabel);

    TranslationResult r;
    r.source = Requirement{"m1", "The lamp shall be red.", RequirementSource::Legacy, {}};
    r.rule = RuleKind::ModalVerb;
    r.query = r.source.text;
    r.output = "The lamp MUST be red.";
    r.support_set_id = "modal-4";
    graded = ingest_labels({LabelRecord{"modal-4", "The  lamp shall be red.", std::nullopt, std::nullopt, 1}}, {r});
    REQUIRE(graded.size() == 1);
    CHECK(graded[0].result.output == r.output);

    CHECK(code_of([&] { ingest_labels({LabelRecord{"modal-4", r.query, std::nullopt, std::nullopt, 7}}, {r}); }) ==
          ErrorCode::UnknownClass);
    CHECK(code_of([&] { ingest_labels({LabelRecord{"modal-6", r.query, std::nullopt, std::nullopt, 1}}, {r}); }) ==
          ErrorCode::DanglingReference);
  }

  TEST_CASE("human labels are never overwritten") {
    auto human = ingest_labels({LabelRecord{"s", "q", "out", RuleKind::ModalVerb, 3}});
    const auto automatic = grade_auto("q", "out", RuleKind::ModalVerb);
    attach_auto_grade(human[0], automatic);
    CHECK(human[0].grade.value() == 3);
    CHECK(human[0].provenance == GradeProvenance::HumanLabel);
    REQUIRE(human[0].auto_grade.has_value());
    CHECK(*human[0].auto_grade == automatic.grade);
  }

  TEST_CASE("identity rows grade 5 and match their human label") {
    int rows = 0;
    for (const auto& rec : testing::paper_corpus().recordings()) {
      const auto rule = rule_of(rec);
      if (!is_identity(rec) || rule_conformance(rule, rec.query) == Severity::Conformant) continue;
      ++rows;
      CAPTURE(rec.support_set_id);
      CAPTURE(rec.query);
      CHECK(grade_auto(rec.query, rec.output, rule).grade.value() == 5);
      REQUIRE(rec.human_class.has_value());
      CHECK(*rec.human_class == 5);
    }
    CHECK(rows > 10);
  }

  TEST_CASE("modal rows labelled class 1 grade 1") {
    int rows = 0;
    for (const auto& rec : testing::paper_corpus().recordings()) {
      if (rule_of(rec) != RuleKind::ModalVerb || rec.human_class != 1) continue;
      ++rows;
      CAPTURE(rec.query);
      CAPTURE(rec.output);
      CHECK(grade_auto(rec.query, rec.output, RuleKind::ModalVerb).grade.value() == 1);
    }
    CHECK(rows == 14);
  }

  TEST_CASE("property: never 2 or 4 when the output is conformant") {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& rec : testing::paper_corpus().recordings()) pairs.emplace_back(rec.query, rec.output);
    for (const auto& r : testing::paper_corpus().requirements())
      for (auto rule : kAllRules) pairs.emplace_back(r.text, mock_translate(rule, r.text));
    for (const auto& [src, out] : pairs)
      for (auto rule : kAllRules) {
        if (rule_conformance(rule, out) != Severity::Conformant) continue;
        const int g = grade_auto(src, out, rule).grade.value();
        CAPTURE(out);
        CHECK(g != 2);
        CHECK(g != 4);
      }
  }
}
