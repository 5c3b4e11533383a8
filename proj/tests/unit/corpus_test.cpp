#include <doctest.h>

#include <fstream>
#include <functional>

#include "reqdsl/corpus.hpp"
#include "reqdsl/error.hpp"
#include "support.hpp"

using namespace reqdsl;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

fs::path copy_corpus(const std::string& name) {
  const auto dir = testing::scratch_dir(name);
  fs::copy(testing::corpus_dir(), dir, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  return dir;
}

void append_line(const fs::path& file, const std::string& line) {
  std::ofstream(file, std::ios::app) << line << "\n";
}

std::size_t line_count(const fs::path& file) {
  std::ifstream in(file);
  std::size_t n = 0;
  for (std::string l; std::getline(in, l);) ++n;
  return n;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("bundled corpus counts") {
    const auto& c = testing::paper_corpus();
    CHECK(c.get_test_set("ifthen-test").requirement_ids.size() == 11);
    CHECK(c.get_test_set("modal-test").requirement_ids.size() == 8);
    CHECK(c.get_test_set("expression-test").requirement_ids.size() == 8);
    CHECK(c.support_sets().size() == 11);
    CHECK(c.recordings().size() == 97);
    for (const auto& set : c.support_sets()) CHECK(set.provenance == SupportProvenance::PaperFixture);
    CHECK(c.get_support_set("ifthen-6").size() == 6);
    CHECK(c.get_support_set("expr-8").size() == 8);
  }

  TEST_CASE("save then load is lossless") {
    const auto dir = testing::scratch_dir("roundtrip");
    save_corpus(testing::paper_corpus(), dir);
    const auto again = load_corpus(dir);
    CHECK(again == testing::paper_corpus());
    save_corpus(again, dir);
    CHECK(load_corpus(dir) == again);
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
    fs::remove_all(dir);
  }

  TEST_CASE("unicode and control characters survive a round trip") {
    CorpusStore store;
    store.add_requirement({"u1", "Distance \xE2\x89\xA4 5m \"quoted\"\ttab", RequirementSource::Dsl, {"a", "b"}});
    store.add_support_set({"s/1", RuleKind::ModalVerb, {{"x is 1", "x MUST be 1"}}, SupportProvenance::User, "one"});
    store.add_test_set({"t1", RuleKind::ModalVerb, {"u1"}});
    store.add_recording({"s/1", "x is 1", "x MUST be 1", 1});
    const auto dir = testing::scratch_dir("unicode");
    save_corpus(store, dir);
    CHECK(load_corpus(dir) == store);
    fs::remove_all(dir);
  }

  TEST_CASE("missing field is reported with file, line and field") {
    const auto dir = copy_corpus("malformed");
    const auto file = dir / "requirements.jsonl";
    const auto line = line_count(file) + 1;
    append_line(file, R"({"id": "bad-01", "source": "legacy"})");
    try {
      load_corpus(dir);
      FAIL("expected MalformedRecord");
    } catch (const MalformedRecordError& e) {
      CHECK(e.code() == ErrorCode::MalformedRecord);
      CHECK(e.file() == "requirements.jsonl");
      CHECK(e.line() == line);
      CHECK(e.field() == "text");
    }
    fs::remove_all(dir);
  }

  TEST_CASE("invalid json and out-of-range labels are malformed") {
    auto dir = copy_corpus("badjson");
    append_line(dir / "test_sets.jsonl", "{not json");
    CHECK(code_of([&] { load_corpus(dir); }) == ErrorCode::MalformedRecord);
    fs::remove_all(dir);

    dir = copy_corpus("badclass");
    append_line(dir / "recordings.jsonl",
                R"({"support_set_id": "modal-1", "query": "q", "output": "o", "human_class": 9})");
    try {
      load_corpus(dir);
      FAIL("expected MalformedRecord");
    } catch (const MalformedRecordError& e) {
      CHECK(e.field() == "human_class");
    }
    fs::remove_all(dir);
  }

  TEST_CASE("duplicate ids are rejected") {
    CorpusStore store;
    store.add_requirement({"r1", "x", RequirementSource::Legacy, {}});
    CHECK(code_of([&] { store.add_requirement({"r1", "y", RequirementSource::Legacy, {}}); }) ==
          ErrorCode::DuplicateId);
    store.add_recording({"s", "q", "o", std::nullopt});
    CHECK(code_of([&] { store.add_recording({"s", "q ", "o2", std::nullopt}); }) == ErrorCode::DuplicateId);

    const auto dir = copy_corpus("dup");
    append_line(dir / "requirements.jsonl", R"({"id": "ift-01", "text": "again", "source": "legacy"})");
    CHECK(code_of([&] { load_corpus(dir); }) == ErrorCode::DuplicateId);
    fs::remove_all(dir);
  }

  TEST_CASE("dangling references and unknown ids") {
    const auto dir = copy_corpus("dangling");
    append_line(dir / "test_sets.jsonl", R"({"id": "t-x", "rule": "modal_verb", "requirement_ids": ["nope"]})");
    CHECK(code_of([&] { load_corpus(dir); }) == ErrorCode::DanglingReference);
    fs::remove_all(dir);

    const auto& c = testing::paper_corpus();
    CHECK(code_of([&] { c.get_requirement("nope"); }) == ErrorCode::UnknownId);
    CHECK(code_of([&] { c.get_support_set("nope"); }) == ErrorCode::UnknownSupportSet);
    CHECK(code_of([&] { load_corpus(testing::scratch_dir("empty")); }) == ErrorCode::Io);
  }

  TEST_CASE("recordings file loads on its own") {
    const auto recs = load_recordings(testing::corpus_dir() / "recordings.jsonl");
    CHECK(recs == testing::paper_corpus().recordings());
  }
}
