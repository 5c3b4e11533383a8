#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "reqdsl/reqdsl.hpp"

using namespace reqdsl;

namespace {

const CorpusStore& corpus() {
  static const CorpusStore store = load_corpus(REQDSL_FIXTURE_DIR "/paper_corpus");
  return store;
}

void BM_Analyze(benchmark::State& state) {
  const auto& reqs = corpus().requirements();
  for (auto _ : state)
    for (const auto& r : reqs) benchmark::DoNotOptimize(analyze(r));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(reqs.size()));
}
BENCHMARK(BM_Analyze);

void BM_Extract(benchmark::State& state) {
  const auto& reqs = corpus().requirements();
  for (auto _ : state)
    for (const auto& r : reqs) benchmark::DoNotOptimize(extract_constraints(r));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(reqs.size()));
}
BENCHMARK(BM_Extract);

void BM_Consistency(benchmark::State& state) {
  std::vector<Constraint> all;
  for (const auto& r : corpus().requirements()) {
    auto cs = extract_constraints(r);
    all.insert(all.end(), cs.begin(), cs.end());
  }
  for (auto _ : state) benchmark::DoNotOptimize(check_consistency(all));
  state.counters["constraints"] = static_cast<double>(all.size());
}
BENCHMARK(BM_Consistency);

void BM_Prompt(benchmark::State& state) {
  const auto& set = corpus().support_sets().front();
  const std::string query = "The wipers shall be switched on when it rains.";
  for (auto _ : state) {
    auto p = build_prompt(set, query);
    benchmark::DoNotOptimize(prompt_hash(p));
  }
}
BENCHMARK(BM_Prompt);

void BM_MockTranslate(benchmark::State& state) {
  const auto& reqs = corpus().requirements();
  for (auto _ : state)
    for (const auto& r : reqs) benchmark::DoNotOptimize(mock_translate(RuleKind::ModalVerb, r.text));
}
BENCHMARK(BM_MockTranslate);

void BM_Grade(benchmark::State& state) {
  const auto& reqs = corpus().requirements();
  std::vector<std::string> outputs;
  for (const auto& r : reqs) outputs.push_back(mock_translate(RuleKind::ModalVerb, r.text));
  for (auto _ : state)
    for (std::size_t i = 0; i < reqs.size(); ++i)
      benchmark::DoNotOptimize(grade_auto(reqs[i].text, outputs[i], RuleKind::ModalVerb));
}
BENCHMARK(BM_Grade);

}  // namespace

BENCHMARK_MAIN();
