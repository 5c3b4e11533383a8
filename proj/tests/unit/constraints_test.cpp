#include <doctest.h>

#include <random>

#include "reqdsl/constraints.hpp"
#include "reqdsl/dsl.hpp"
#include "support.hpp"

using namespace reqdsl;

namespace {

std::vector<Constraint> extract(const std::string& text) {
  return extract_constraints(Requirement{"r", text, RequirementSource::Legacy, {}});
}

Constraint numeric(std::string var, ComparisonOp op, int value, std::string source,
                   std::optional<std::string> unit = "m") {
  Constraint c;
  c.variable = std::move(var);
  c.op = op;
  c.value = ConstraintValue::make_number(std::to_string(value));
  c.unit = std::move(unit);
  c.source_requirement = std::move(source);
  return c;
}

// Independent oracle: a point satisfies every constraint.
bool satisfies(double x, const Constraint& c) {
  const double v = c.value.number;
  switch (c.op) {
    case ComparisonOp::Less: return x < v;
    case ComparisonOp::LessOrEqual: return x <= v;
    case ComparisonOp::Greater: return x > v;
    case ComparisonOp::GreaterOrEqual: return x >= v;
    case ComparisonOp::Equal: return x == v;
  }
  return false;
}

// Integer bounds in [0, 100]: scanning [-1, 101] in half steps finds a
// witness whenever the intersection is non-empty.
bool grid_feasible(const std::vector<Constraint>& cs) {
  for (int k = -2; k <= 202; ++k) {
    const double x = k / 2.0;
    if (std::all_of(cs.begin(), cs.end(), [&](const Constraint& c) { return satisfies(x, c); }))
      return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("constraints") {
  TEST_CASE("extraction examples") {
    auto c = extract("The braking distance can not be longer than 300m.");
    REQUIRE(c.size() == 1);
    CHECK(c[0].variable == "braking distance");
    CHECK(c[0].op == ComparisonOp::LessOrEqual);
    CHECK(c[0].value.is_number());
    CHECK(c[0].value.number == 300.0);
    CHECK(c[0].unit == std::optional<std::string>("m"));
    CHECK(c[0].source_requirement == "r");

    c = extract("The minimun distance to a vehicle in front has to be 5m.");
    REQUIRE(c.size() == 1);
    CHECK(c[0].variable == "distance to vehicle in front");
    CHECK(c[0].op == ComparisonOp::GreaterOrEqual);
    CHECK(c[0].value.number == 5.0);
    CHECK(c[0].unit == std::optional<std::string>("m"));

    c = extract("Low beam illuminant shall be LED.");
    REQUIRE(c.size() == 1);
    CHECK(c[0].variable == "low beam illuminant");
    CHECK(c[0].op == ComparisonOp::Equal);
    CHECK_FALSE(c[0].value.is_number());
    CHECK(c[0].value.text == "LED");
    CHECK_FALSE(c[0].unit.has_value());

    CHECK(extract("A flashing cycle has to be completed.").empty());
  }

  TEST_CASE("extraction of the horn, velocity and keyword forms") {
    auto c = extract("The vehicles horn must not be louder than 50dB");
    REQUIRE(c.size() == 1);
    CHECK(render_formula(c[0], FormulaStyle::Mathematical) == "horn loudness <= 50dB");

    c = extract("The vehicles doors are closed automaticly when speeding velocity is GREATER 10km/h.");
    REQUIRE(c.size() == 1);
    CHECK(render_formula(c[0], FormulaStyle::Keyword) == "speeding velocity GREATER 10km/h");

    c = extract("The deviation MUST NOT exceed 0.05s.");
    REQUIRE(c.size() == 1);
    CHECK(c[0].op == ComparisonOp::LessOrEqual);
    CHECK(c[0].value.number == doctest::Approx(0.05));

    c = extract("The distance x <= 7 m.");
    REQUIRE(c.size() == 1);
    CHECK(c[0].op == ComparisonOp::LessOrEqual);
    CHECK(c[0].unit == std::optional<std::string>("m"));
  }

  TEST_CASE("span covers the comparator phrase") {
    const std::string s = "The braking distance can not be longer than 300m.";
    auto c = extract(s);
    REQUIRE(c.size() == 1);
    CHECK(s.substr(c[0].span.begin, c[0].span.size()).find("longer than") != std::string::npos);
  }

  TEST_CASE("negated equality yields a diagnostic, not a constraint") {
    const auto ex = extract_constraints_detailed(
        Requirement{"r", "The colour MUST NOT be EQUAL 5m.", RequirementSource::Dsl, {}});
    CHECK(ex.constraints.empty());
    CHECK_FALSE(ex.diagnostics.empty());
  }

  TEST_CASE("render_formula examples") {
    Constraint horn = numeric("horn loudness", ComparisonOp::LessOrEqual, 50, "r", "dB");
    CHECK(render_formula(horn, FormulaStyle::Mathematical) == "horn loudness <= 50dB");
    Constraint vel = numeric("speeding velocity", ComparisonOp::Greater, 10, "r", "km/h");
    CHECK(render_formula(vel, FormulaStyle::Keyword) == "speeding velocity GREATER 10km/h");
    Constraint sym;
    sym.variable = "x";
    sym.value = ConstraintValue::make_symbol("LED");
    CHECK(render_formula(sym, FormulaStyle::Mathematical) == "x = LED");
  }

  TEST_CASE("consistency examples") {
    auto f = check_consistency({numeric("x", ComparisonOp::LessOrEqual, 300, "R1"),
                                numeric("x", ComparisonOp::GreaterOrEqual, 400, "R2")});
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FindingKind::Contradiction);
    CHECK(f[0].variable == "x");
    CHECK(f[0].constraints.size() == 2);

    f = check_consistency({numeric("x", ComparisonOp::GreaterOrEqual, 5, "R1"),
                           numeric("x", ComparisonOp::Equal, 10, "R2")});
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FindingKind::Link);

    CHECK(check_consistency({numeric("x", ComparisonOp::LessOrEqual, 300, "R1")}).empty());
  }

  TEST_CASE("consistency: same requirement, units and symbols") {
    CHECK(check_consistency({numeric("x", ComparisonOp::LessOrEqual, 3, "R1"),
                             numeric("x", ComparisonOp::GreaterOrEqual, 4, "R1")})
              .empty());

    auto f = check_consistency({numeric("x", ComparisonOp::LessOrEqual, 3, "R1", "m"),
                                numeric("x", ComparisonOp::GreaterOrEqual, 4, "R2", "km")});
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FindingKind::UnitMismatch);

    Constraint a;
    a.variable = "illuminant";
    a.value = ConstraintValue::make_symbol("LED");
    a.source_requirement = "R1";
    Constraint b = a;
    b.source_requirement = "R2";
    f = check_consistency({a, b});
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FindingKind::Link);
    b.value = ConstraintValue::make_symbol("Xenon");
    f = check_consistency({a, b});
    REQUIRE(f.size() == 1);
    CHECK(f[0].kind == FindingKind::Contradiction);
  }

  TEST_CASE("interval bookkeeping") {
    const auto iv = feasible_interval({numeric("x", ComparisonOp::Greater, 3, "a"),
                                       numeric("x", ComparisonOp::LessOrEqual, 5, "b")});
    CHECK_FALSE(iv.empty());
    CHECK_FALSE(iv.contains(3));
    CHECK(iv.contains(5));
    CHECK(feasible_interval({numeric("x", ComparisonOp::Less, 3, "a"),
                             numeric("x", ComparisonOp::Greater, 3, "b")})
              .empty());
    CHECK_FALSE(feasible_interval({numeric("x", ComparisonOp::LessOrEqual, 3, "a"),
                                   numeric("x", ComparisonOp::GreaterOrEqual, 3, "b")})
                    .empty());
  }

  TEST_CASE("property: randomized groups agree with a grid oracle") {
    std::mt19937 rng(20240611);
    for (int round = 0; round < 1000; ++round) {
      const int n = 2 + static_cast<int>(rng() % 5);
      std::vector<Constraint> group;
      for (int i = 0; i < n; ++i)
        group.push_back(numeric("x", kAllOps[rng() % kAllOps.size()], static_cast<int>(rng() % 101),
                                "R" + std::to_string(i)));
      const auto findings = check_consistency(group);
      REQUIRE(findings.size() == 1);
      const bool feasible = grid_feasible(group);
      CAPTURE(round);
      CHECK(findings[0].kind == (feasible ? FindingKind::Link : FindingKind::Contradiction));
      CHECK(feasible_interval(group).empty() == !feasible);
    }
  }

  TEST_CASE("property: negation folding is an involution") {
    for (auto op : kAllOps) {
      if (op == ComparisonOp::Equal) {
        CHECK_FALSE(negate(op).has_value());
        continue;
      }
      REQUIRE(negate(op).has_value());
      CHECK(*negate(op) != op);
      CHECK(negate(*negate(op)) == std::optional<ComparisonOp>(op));
    }
    CHECK(negate(ComparisonOp::Less) == std::optional<ComparisonOp>(ComparisonOp::GreaterOrEqual));
    CHECK(negate(ComparisonOp::Greater) == std::optional<ComparisonOp>(ComparisonOp::LessOrEqual));
    for (auto op : kAllOps) {
      if (op == ComparisonOp::Equal) continue;
      const auto plain = extract("The gap MUST be " + std::string(keyword_form(op)) + " 5m.");
      const auto negated = extract("The gap MUST NOT be " + std::string(keyword_form(op)) + " 5m.");
      REQUIRE(plain.size() == 1);
      REQUIRE(negated.size() == 1);
      CHECK(plain[0].op == op);
      CHECK(negate(negated[0].op) == std::optional<ComparisonOp>(op));
    }
  }

  TEST_CASE("property: extraction is idempotent on keyword renderings") {
    std::mt19937 rng(5);
    const std::vector<std::string> vars = {"braking distance", "frame rate", "horn loudness",
                                           "speeding velocity", "duration of flashing cycle"};
    const std::vector<std::string> units = {"m", "km/h", "dB", "s", "Hz", "cd"};
    for (int i = 0; i < 300; ++i) {
      Constraint c = numeric(vars[rng() % vars.size()], kAllOps[rng() % kAllOps.size()],
                             static_cast<int>(rng() % 1000), "r", units[rng() % units.size()]);
      const std::string sentence = "The " + c.variable + " MUST be " +
                                   std::string(keyword_form(c.op)) + " " + render_value(c) + ".";
      CAPTURE(sentence);
      const auto once = extract(sentence);
      REQUIRE(once.size() == 1);
      CHECK(render_formula(once[0], FormulaStyle::Keyword) == render_formula(c, FormulaStyle::Keyword));
      const auto again = extract("The " + render_formula(once[0], FormulaStyle::Keyword) + ".");
      REQUIRE(again.size() == 1);
      CHECK(again[0].variable == once[0].variable);
      CHECK(again[0].op == once[0].op);
      CHECK(again[0].value == once[0].value);
      CHECK(again[0].unit == once[0].unit);
    }
  }

  TEST_CASE("property: corpus-wide extraction invariants") {
    const auto& lex = Lexicon::builtin();
    std::vector<std::string> texts;
    for (const auto& r : testing::paper_corpus().requirements()) texts.push_back(r.text);
    for (const auto& r : testing::paper_corpus().recordings()) texts.push_back(r.output);
    for (const auto& t : texts) {
      const auto cs = extract(t);
      CHECK(cs == extract(t));
      for (const auto& c : cs) {
        CAPTURE(t);
        if (!c.value.is_number()) CHECK(c.op == ComparisonOp::Equal);
        CHECK_FALSE(c.variable.empty());
        for (const auto& entry : lex.comparators)
          CHECK((" " + c.variable + " ").find(" " + entry.phrase + " ") == std::string::npos);
        CHECK(c.span.end <= t.size());
      }
    }
  }
}
