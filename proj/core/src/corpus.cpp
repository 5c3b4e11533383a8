#include "reqdsl/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include "reqdsl/json_io.hpp"
#include "reqdsl/text.hpp"

namespace reqdsl {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Store
// ---------------------------------------------------------------------------

namespace {

template <class T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::find_if(items.begin(), items.end(), [&](const T& x) { return x.id == id; });
  return it == items.end() ? nullptr : &*it;
}

}  // namespace

void CorpusStore::add_requirement(Requirement req) {
  if (find_requirement(req.id))
    throw Error(ErrorCode::DuplicateId, "requirement '" + req.id + "' already exists");
  requirements_.push_back(std::move(req));
}

void CorpusStore::add_support_set(SupportSet set) {
  if (find_support_set(set.id))
    throw Error(ErrorCode::DuplicateId, "support set '" + set.id + "' already exists");
  support_sets_.push_back(std::move(set));
}

void CorpusStore::add_test_set(TestSet set) {
  if (find_test_set(set.id))
    throw Error(ErrorCode::DuplicateId, "test set '" + set.id + "' already exists");
  test_sets_.push_back(std::move(set));
}

void CorpusStore::add_recording(RecordedOutput rec) {
  if (find_recording(rec.support_set_id, rec.query))
    throw Error(ErrorCode::DuplicateId,
                "recording for '" + rec.support_set_id + "' / '" + rec.query + "' already exists");
  recordings_.push_back(std::move(rec));
}

const Requirement* CorpusStore::find_requirement(std::string_view id) const {
  return find_by_id(requirements_, id);
}

const SupportSet* CorpusStore::find_support_set(std::string_view id) const {
  return find_by_id(support_sets_, id);
}

const TestSet* CorpusStore::find_test_set(std::string_view id) const {
  return find_by_id(test_sets_, id);
}

const RecordedOutput* CorpusStore::find_recording(std::string_view support_set_id,
                                                  std::string_view query) const {
  const auto key = text::collapse_whitespace(query);
  auto it = std::find_if(recordings_.begin(), recordings_.end(), [&](const RecordedOutput& r) {
    return r.support_set_id == support_set_id && text::collapse_whitespace(r.query) == key;
  });
  return it == recordings_.end() ? nullptr : &*it;
}

const Requirement& CorpusStore::get_requirement(std::string_view id) const {
  if (auto* r = find_requirement(id)) return *r;
  throw Error(ErrorCode::UnknownId, "unknown requirement '" + std::string(id) + "'");
}

const SupportSet& CorpusStore::get_support_set(std::string_view id) const {
  if (auto* s = find_support_set(id)) return *s;
  throw Error(ErrorCode::UnknownSupportSet, "unknown support set '" + std::string(id) + "'");
}

const TestSet& CorpusStore::get_test_set(std::string_view id) const {
  if (auto* t = find_test_set(id)) return *t;
  throw Error(ErrorCode::UnknownId, "unknown test set '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Field accessors that report the file and line of the record.
class RecordReader {
 public:
  RecordReader(std::string file, std::size_t line, const Json& j)
      : file_(std::move(file)), line_(line), j_(j) {
    if (!j_.is_object()) fail("(record)", "expected an object");
  }

  [[noreturn]] void fail(const std::string& field, const std::string& why) const {
    throw MalformedRecordError(file_, line_, field, why);
  }

  std::string str(const char* field) const {
    auto it = j_.find(field);
    if (it == j_.end()) fail(field, "missing");
    if (!it->is_string()) fail(field, "expected a string");
    return it->get<std::string>();
  }

  std::optional<std::string> opt_str(const char* field) const {
    auto it = j_.find(field);
    if (it == j_.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(field, "expected a string");
    return it->get<std::string>();
  }

  std::vector<std::string> strings(const char* field, bool required) const {
    std::vector<std::string> out;
    auto it = j_.find(field);
    if (it == j_.end()) {
      if (required) fail(field, "missing");
      return out;
    }
    if (!it->is_array()) fail(field, "expected an array of strings");
    for (const auto& v : *it) {
      if (!v.is_string()) fail(field, "expected an array of strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  }

  const Json& json() const noexcept { return j_; }

  RuleKind rule(const char* field) const {
    const auto name = str(field);
    auto r = parse_rule_kind(name);
    if (!r) fail(field, "unknown rule '" + name + "'");
    return *r;
  }

 private:
  std::string file_;
  std::size_t line_;
  const Json& j_;
};

/// Calls `fn(reader)` for every non-blank line of a line-record file.
template <class Fn>
void for_each_record(const fs::path& path, const std::string& display, Fn fn) {
  const auto content = read_file(path);
  std::istringstream in(content);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw MalformedRecordError(display, n, "(record)", e.what());
    }
    fn(RecordReader(display, n, j));
  }
}

Json read_json_file(const fs::path& path, const std::string& display) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw MalformedRecordError(display, 1, "(document)", e.what());
  }
}

Requirement decode_requirement(const RecordReader& r) {
  Requirement req;
  req.id = r.str("id");
  if (text::trim(req.id).empty()) r.fail("id", "must not be blank");
  req.text = r.str("text");
  if (!has_valid_text(req)) r.fail("text", "must not be blank");
  if (auto s = r.opt_str("source")) {
    auto parsed = parse_requirement_source(*s);
    if (!parsed) r.fail("source", "unknown source '" + *s + "'");
    req.source = *parsed;
  }
  req.tags = r.strings("tags", false);
  return req;
}

RecordedOutput decode_recording(const RecordReader& r) {
  const auto& j = r.json();
  RecordedOutput rec;
  rec.support_set_id = r.str("support_set_id");
  rec.query = r.str("query");
  rec.output = r.str("output");
  if (auto it = j.find("human_class"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) r.fail("human_class", "expected an integer");
    const int c = it->get<int>();
    if (c < 1 || c > 6) r.fail("human_class", "outside 1..6");
    rec.human_class = c;
  }
  return rec;
}

std::string rel(const fs::path& base, const fs::path& p) {
  return fs::relative(p, base).generic_string();
}

}  // namespace

std::vector<RecordedOutput> load_recordings(const fs::path& file) {
  std::vector<RecordedOutput> out;
  for_each_record(file, file.string(),
                  [&](const RecordReader& r) { out.push_back(decode_recording(r)); });
  return out;
}

CorpusStore load_corpus(const fs::path& dir) {
  const auto index_path = dir / "index.json";
  if (!fs::exists(index_path)) throw Error(ErrorCode::Io, "no index.json in " + dir.string());
  const auto index = read_json_file(index_path, "index.json");
  const RecordReader idx("index.json", 1, index);
  if (auto it = index.find("format_version"); it != index.end()) {
    if (!it->is_number_integer() || it->get<int>() != kCorpusFormatVersion)
      idx.fail("format_version", "unsupported version");
  }

  CorpusStore store;
  if (auto name = idx.opt_str("requirements"))
    for_each_record(dir / *name, *name, [&](const RecordReader& r) {
      store.add_requirement(decode_requirement(r));
    });

  if (auto it = index.find("support_sets"); it != index.end()) {
    if (!it->is_array()) idx.fail("support_sets", "expected an array");
    for (const auto& entry : *it) {
      const RecordReader e("index.json", 1, entry);
      const auto header_name = e.str("header");
      const auto pairs_name = e.str("pairs");
      const auto header = read_json_file(dir / header_name, header_name);
      const RecordReader h(header_name, 1, header);
      SupportSet set;
      set.id = h.str("id");
      set.rule = h.rule("rule");
      if (auto p = h.opt_str("provenance")) {
        auto parsed = parse_support_provenance(*p);
        if (!parsed) h.fail("provenance", "unknown provenance '" + *p + "'");
        set.provenance = *parsed;
      }
      set.label = h.opt_str("label");
      for_each_record(dir / pairs_name, pairs_name, [&](const RecordReader& r) {
        set.pairs.push_back({r.str("input"), r.str("dsl")});
      });
      validate_support_set(set);
      store.add_support_set(std::move(set));
    }
  }

  if (auto name = idx.opt_str("test_sets"))
    for_each_record(dir / *name, *name, [&](const RecordReader& r) {
      TestSet t;
      t.id = r.str("id");
      t.rule = r.rule("rule");
      t.requirement_ids = r.strings("requirement_ids", true);
      for (const auto& id : t.requirement_ids)
        if (!store.find_requirement(id))
          throw Error(ErrorCode::DanglingReference,
                      *name + ": test set '" + t.id + "' references unknown requirement '" + id + "'");
      store.add_test_set(std::move(t));
    });

  if (auto name = idx.opt_str("recordings"))
    for_each_record(dir / *name, *name, [&](const RecordReader& r) {
      auto rec = decode_recording(r);
      if (!store.find_support_set(rec.support_set_id))
        r.fail("support_set_id", "unknown support set '" + rec.support_set_id + "'");
      store.add_recording(std::move(rec));
    });
  return store;
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp" + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

namespace {

template <class T>
std::string lines(const std::vector<T>& items) {
  std::string out;
  for (const auto& x : items) {
    out += Json(x).dump();
    out.push_back('\n');
  }
  return out;
}

std::string file_stem_for(std::string_view id, std::set<std::string>& used) {
  std::string stem;
  for (char c : id)
    stem.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'
                       ? c
                       : '_');
  if (stem.empty() || stem[0] == '.') stem.insert(stem.begin(), '_');
  auto candidate = stem;
  for (int k = 2; used.count(candidate); ++k) candidate = stem + "-" + std::to_string(k);
  used.insert(candidate);
  return candidate;
}

}  // namespace

void save_corpus(const CorpusStore& store, const fs::path& dir) {
  fs::create_directories(dir / "support_sets");
  Json index{{"format_version", kCorpusFormatVersion},
             {"requirements", "requirements.jsonl"},
             {"test_sets", "test_sets.jsonl"},
             {"recordings", "recordings.jsonl"},
             {"support_sets", Json::array()}};
  std::set<std::string> used;
  for (const auto& set : store.support_sets()) {
    const auto stem = file_stem_for(set.id, used);
    Json header{{"id", set.id},
                {"rule", to_string(set.rule)},
                {"provenance", to_string(set.provenance)}};
    if (set.label) header["label"] = *set.label;
    const auto header_path = dir / "support_sets" / (stem + ".json");
    const auto pairs_path = dir / "support_sets" / (stem + ".jsonl");
    write_file_atomic(header_path, header.dump() + "\n");
    write_file_atomic(pairs_path, lines(set.pairs));
    index["support_sets"].push_back(
        {{"header", rel(dir, header_path)}, {"pairs", rel(dir, pairs_path)}});
  }
  write_file_atomic(dir / "requirements.jsonl", lines(store.requirements()));
  write_file_atomic(dir / "test_sets.jsonl", lines(store.test_sets()));
  write_file_atomic(dir / "recordings.jsonl", lines(store.recordings()));
  // The index goes last so a reader never sees it name a missing file.
  write_file_atomic(dir / "index.json", index.dump(2) + "\n");
}

}  // namespace reqdsl
