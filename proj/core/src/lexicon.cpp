#include "reqdsl/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lexicon_data.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/text.hpp"

namespace reqdsl {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> columns;
};

// One record per line; '#' starts a comment line; columns are tab separated.
std::vector<Line> parse_lines(std::string_view content) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const auto nl = content.find('\n', pos);
    const auto raw = content.substr(pos, nl == std::string_view::npos ? content.size() - pos
                                                                      : nl - pos);
    ++number;
    pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    Line rec{number, {}};
    std::size_t b = 0;
    while (true) {
      const auto tab = line.find('\t', b);
      rec.columns.emplace_back(text::trim(line.substr(b, tab == std::string_view::npos ? line.npos
                                                                                       : tab - b)));
      if (tab == std::string_view::npos) break;
      b = tab + 1;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

[[noreturn]] void bad_line(std::string_view file, std::size_t line, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig,
              std::string(file) + ":" + std::to_string(line) + ": " + why);
}

ComparatorForm parse_form(std::string_view file, std::size_t line, std::string_view s) {
  if (s.empty() || s == "adjectival") return ComparatorForm::Adjectival;
  if (s == "verb") return ComparatorForm::Verb;
  if (s == "verb3") return ComparatorForm::Verb3;
  bad_line(file, line, "unknown comparator form '" + std::string(s) + "'");
}

template <class T, class Words>
void sort_longest_first(std::vector<T>& items, Words words) {
  std::stable_sort(items.begin(), items.end(),
                   [&](const T& a, const T& b) { return words(a).size() > words(b).size(); });
}

}  // namespace

void Lexicon::apply_file(std::string_view name, std::string_view content) {
  const auto lines = parse_lines(content);
  if (name == "weak_modals.txt") {
    weak_modals.clear();
    for (const auto& l : lines) {
      WeakModal m;
      m.phrase = l.columns[0];
      m.words = text::phrase_words(m.phrase);
      if (l.columns.size() > 1 && !l.columns[1].empty()) m.replacement = l.columns[1];
      weak_modals.push_back(std::move(m));
    }
    sort_longest_first(weak_modals, [](const WeakModal& m) { return m.words; });
  } else if (name == "trigger_markers.txt") {
    trigger_markers.clear();
    for (const auto& l : lines) trigger_markers.push_back(text::phrase_words(l.columns[0]));
    sort_longest_first(trigger_markers, [](const auto& w) { return w; });
  } else if (name == "comparators.tsv") {
    comparators.clear();
    for (const auto& l : lines) {
      if (l.columns.size() < 2) bad_line(name, l.number, "expected phrase<TAB>operator");
      const auto op = op_from_math(l.columns[1]);
      if (!op) bad_line(name, l.number, "unknown operator '" + l.columns[1] + "'");
      ComparatorEntry e;
      e.phrase = l.columns[0];
      e.words = text::phrase_words(e.phrase);
      e.op = *op;
      e.form = parse_form(name, l.number, l.columns.size() > 2 ? l.columns[2] : "");
      comparators.push_back(std::move(e));
    }
    sort_longest_first(comparators, [](const ComparatorEntry& e) { return e.words; });
  } else if (name == "adjectives.tsv") {
    adjectives.clear();
    for (const auto& l : lines) {
      if (l.columns.size() < 2) bad_line(name, l.number, "expected adjective<TAB>quantity");
      adjectives.push_back({text::to_lower(l.columns[0]), l.columns[1]});
    }
  } else if (name == "units.tsv") {
    units.clear();
    for (const auto& l : lines)
      units.push_back({l.columns[0], l.columns.size() > 1 ? l.columns[1] : l.columns[0]});
    std::stable_sort(units.begin(), units.end(), [](const UnitEntry& a, const UnitEntry& b) {
      return a.surface.size() > b.surface.size();
    });
  } else if (name == "superlatives.tsv") {
    superlatives.clear();
    for (const auto& l : lines) {
      if (l.columns.size() < 2) bad_line(name, l.number, "expected marker<TAB>operator");
      const auto op = op_from_math(l.columns[1]);
      if (!op) bad_line(name, l.number, "unknown operator '" + l.columns[1] + "'");
      superlatives.push_back({text::to_lower(l.columns[0]), *op});
    }
  } else if (name == "possessors.txt") {
    possessors.clear();
    for (const auto& l : lines) possessors.push_back(text::to_lower(l.columns[0]));
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown lexicon file '" + std::string(name) + "'");
  }
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lexicon = [] {
    Lexicon lex;
    for (auto name : kLexiconFileNames) lex.apply_file(name, detail::builtin_lexicon_file(name));
    return lex;
  }();
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& dir) {
  Lexicon lex = builtin();
  for (auto name : kLexiconFileNames) {
    const auto path = dir / std::string(name);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    lex.apply_file(name, buf.str());
  }
  return lex;
}

const UnitEntry* Lexicon::find_unit(std::string_view surface) const {
  for (const auto& u : units)
    if (u.surface == surface) return &u;
  return nullptr;
}

std::optional<std::string> Lexicon::quantity_for(std::string_view adjective) const {
  const auto lower = text::to_lower(adjective);
  for (const auto& a : adjectives)
    if (a.adjective == lower) return a.quantity;
  return std::nullopt;
}

std::optional<ComparisonOp> Lexicon::superlative_op(std::string_view word) const {
  const auto lower = text::to_lower(word);
  for (const auto& s : superlatives)
    if (s.marker == lower) return s.op;
  return std::nullopt;
}

bool Lexicon::is_possessor(std::string_view lower_word) const {
  return std::find(possessors.begin(), possessors.end(), lower_word) != possessors.end();
}

}  // namespace reqdsl
