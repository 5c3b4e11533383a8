#include "reqdsl/constraints.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "reqdsl/text.hpp"
#include "wordsets.hpp"

namespace reqdsl {

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_possessive(const std::vector<std::string>& words, std::size_t k, const Lexicon& lexicon) {
  const auto& w = words[k];
  if (ends_with(w, "'s") || ends_with(w, "\xE2\x80\x99s") || (ends_with(w, "s'") && w.size() > 2))
    return true;
  // "the vehicles horn": a listed noun in plural form directly before a noun.
  if (w.size() < 2 || w.back() != 's' || !lexicon.is_possessor(w.substr(0, w.size() - 1)))
    return false;
  if (k + 1 >= words.size()) return false;
  const auto& next = words[k + 1];
  return !detail::is_preposition_or_conjunction(next) && !detail::is_determiner(next) &&
         !detail::is_verb_group_word(next);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

}  // namespace

ConstraintValue ConstraintValue::make_number(std::string lexical) {
  ConstraintValue v;
  v.kind = Kind::Number;
  double d = 0.0;
  std::from_chars(lexical.data(), lexical.data() + lexical.size(), d);
  v.number = d;
  v.text = std::move(lexical);
  return v;
}

ConstraintValue ConstraintValue::make_symbol(std::string symbol) {
  ConstraintValue v;
  v.kind = Kind::Symbol;
  v.text = std::move(symbol);
  return v;
}

std::string normalize_variable(std::string_view raw, const Lexicon& lexicon) {
  std::vector<std::string> words;
  int depth = 0;
  for (const auto& tok : text::tokenize(raw)) {
    if (tok.text == "(") ++depth;
    if (tok.text == ")" && depth > 0) --depth;
    if (depth > 0 || !tok.word) continue;
    words.push_back(text::to_lower(tok.text));
  }
  std::size_t from = 0;
  for (std::size_t k = 0; k < words.size(); ++k)
    if (is_possessive(words, k, lexicon)) from = k + 1;
  std::string out;
  for (std::size_t k = from; k < words.size(); ++k) {
    if (detail::is_determiner(words[k]) || lexicon.superlative_op(words[k])) continue;
    if (!out.empty()) out.push_back(' ');
    out += words[k];
  }
  return out;
}

Extraction extract_constraints_detailed(const Requirement& req, const Lexicon& lexicon) {
  Extraction ex;
  const std::string_view text = req.text;
  const auto scan = scan_comparators(text, lexicon);
  for (const auto& m : scan.matches) {
    if (!m.op) {
      ex.diagnostics.push_back({RuleKind::Expression, Severity::Info, m.site,
                                "negated-equality",
                                "negated equality has no DSL keyword; no constraint extracted",
                                std::nullopt});
      continue;
    }
    if (!m.value) continue;
    if (!m.value->is_number() && *m.op != ComparisonOp::Equal) {
      ex.diagnostics.push_back({RuleKind::Expression, Severity::Info, m.phrase,
                                "symbolic-bound",
                                "symbolic value '" + m.value->text +
                                    "' is only kept for equality",
                                std::nullopt});
      continue;
    }
    std::string variable = normalize_variable(detail::slice(text, m.subject), lexicon);
    if (m.quantity && !variable.empty() && !ends_with(variable, *m.quantity))
      variable += " " + *m.quantity;
    if (variable.empty()) continue;
    Constraint c;
    c.variable = std::move(variable);
    c.op = *m.op;
    c.value = *m.value;
    c.unit = m.unit;
    c.source_requirement = req.id;
    c.span = m.phrase;
    ex.constraints.push_back(std::move(c));
  }
  for (const auto& span : scan.unmapped_comparatives)
    ex.diagnostics.push_back({RuleKind::Expression, Severity::Info, span, "unmapped-adjective",
                              "comparative '" + std::string(detail::slice(text, span)) +
                                  "' has no quantity mapping; variable left unchanged",
                              std::nullopt});
  return ex;
}

std::vector<Constraint> extract_constraints(const Requirement& req, const Lexicon& lexicon) {
  return extract_constraints_detailed(req, lexicon).constraints;
}

std::string render_value(const Constraint& c) {
  std::string out = c.value.text;
  if (c.unit) {
    const auto& u = *c.unit;
    const bool attached = u.size() <= 3 || u.find('/') != std::string::npos ||
                          u.find('%') != std::string::npos;
    if (!attached) out.push_back(' ');
    out += u;
  }
  return out;
}

std::string render_formula(const Constraint& c, FormulaStyle style) {
  const auto op = style == FormulaStyle::Mathematical ? math_form(c.op) : keyword_form(c.op);
  return c.variable + " " + std::string(op) + " " + render_value(c);
}

std::string_view to_string(FindingKind kind) noexcept {
  switch (kind) {
    case FindingKind::Contradiction: return "contradiction";
    case FindingKind::Link: return "link";
    case FindingKind::UnitMismatch: return "unit_mismatch";
  }
  return "";
}

bool Interval::empty() const noexcept {
  if (!lower || !upper) return false;
  if (*lower > *upper) return true;
  return *lower == *upper && (lower_open || upper_open);
}

bool Interval::contains(double x) const noexcept {
  if (lower && (x < *lower || (lower_open && x == *lower))) return false;
  if (upper && (x > *upper || (upper_open && x == *upper))) return false;
  return true;
}

Interval feasible_interval(const std::vector<Constraint>& numeric) {
  Interval iv;
  auto tighten_upper = [&](double v, bool open) {
    if (!iv.upper || v < *iv.upper) {
      iv.upper = v;
      iv.upper_open = open;
    } else if (v == *iv.upper) {
      iv.upper_open = iv.upper_open || open;
    }
  };
  auto tighten_lower = [&](double v, bool open) {
    if (!iv.lower || v > *iv.lower) {
      iv.lower = v;
      iv.lower_open = open;
    } else if (v == *iv.lower) {
      iv.lower_open = iv.lower_open || open;
    }
  };
  for (const auto& c : numeric) {
    if (!c.value.is_number()) continue;
    const double v = c.value.number;
    switch (c.op) {
      case ComparisonOp::Less: tighten_upper(v, true); break;
      case ComparisonOp::LessOrEqual: tighten_upper(v, false); break;
      case ComparisonOp::Greater: tighten_lower(v, true); break;
      case ComparisonOp::GreaterOrEqual: tighten_lower(v, false); break;
      case ComparisonOp::Equal:
        tighten_upper(v, false);
        tighten_lower(v, false);
        break;
    }
  }
  return iv;
}

namespace {

std::size_t distinct_sources(const std::vector<Constraint>& group) {
  std::set<std::string> ids;
  for (const auto& c : group) ids.insert(c.source_requirement);
  return ids.size();
}

std::string describe(const Interval& iv) {
  std::string out = iv.lower ? (iv.lower_open ? "(" : "[") + format_number(*iv.lower) : "(-inf";
  out += ", ";
  out += iv.upper ? format_number(*iv.upper) + (iv.upper_open ? ")" : "]") : "+inf)";
  return out;
}

}  // namespace

std::vector<ConsistencyFinding> check_consistency(const std::vector<Constraint>& constraints) {
  // Groups keep first-appearance order so reports are stable.
  std::vector<std::string> order;
  std::map<std::string, std::vector<Constraint>> by_variable;
  for (const auto& c : constraints) {
    auto [it, inserted] = by_variable.try_emplace(c.variable);
    if (inserted) order.push_back(c.variable);
    it->second.push_back(c);
  }

  std::vector<ConsistencyFinding> findings;
  for (const auto& variable : order) {
    const auto& group = by_variable[variable];
    if (distinct_sources(group) < 2) continue;

    std::vector<std::optional<std::string>> units;
    for (const auto& c : group)
      if (std::find(units.begin(), units.end(), c.unit) == units.end()) units.push_back(c.unit);
    if (units.size() > 1) {
      std::string listed;
      for (const auto& u : units) listed += (listed.empty() ? "" : ", ") + u.value_or("(none)");
      findings.push_back({FindingKind::UnitMismatch, variable, group,
                          "'" + variable + "' is bounded in different units: " + listed});
    }

    for (const auto& unit : units) {
      std::vector<Constraint> sub;
      for (const auto& c : group)
        if (c.unit == unit) sub.push_back(c);
      if (distinct_sources(sub) < 2) continue;

      std::set<std::string> symbols;
      std::vector<Constraint> numeric;
      for (const auto& c : sub) {
        if (c.value.is_number())
          numeric.push_back(c);
        else
          symbols.insert(c.value.text);
      }
      ConsistencyFinding f{FindingKind::Link, variable, sub, ""};
      if (symbols.size() > 1) {
        f.kind = FindingKind::Contradiction;
        std::string listed;
        for (const auto& s : symbols) listed += (listed.empty() ? "" : ", ") + s;
        f.explanation = "'" + variable + "' is equated to distinct values: " + listed;
      } else if (!numeric.empty()) {
        const auto iv = feasible_interval(numeric);
        if (iv.empty()) {
          f.kind = FindingKind::Contradiction;
          f.explanation = "no value of '" + variable + "' satisfies all bounds";
        } else {
          f.explanation = "'" + variable + "' feasible in " + describe(iv);
        }
      } else {
        f.explanation = "'" + variable + "' is equated to " + *symbols.begin() + " consistently";
      }
      findings.push_back(std::move(f));
    }
  }
  return findings;
}

}  // namespace reqdsl
