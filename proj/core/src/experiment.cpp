#include "reqdsl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "reqdsl/json_io.hpp"
#include "reqdsl/text.hpp"
#include "reqdsl/translate.hpp"

namespace reqdsl {

std::string_view to_string(GradingMode mode) noexcept {
  switch (mode) {
    case GradingMode::Auto: return "auto";
    case GradingMode::Labels: return "labels";
    case GradingMode::Both: return "both";
  }
  return "";
}

std::optional<GradingMode> parse_grading_mode(std::string_view name) {
  if (name == "auto") return GradingMode::Auto;
  if (name == "labels") return GradingMode::Labels;
  if (name == "both") return GradingMode::Both;
  return std::nullopt;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + file.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, file.string() + ": " + e.what());
  }
  ExperimentSpec spec;
  try {
    spec = experiment_spec_from_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), file.string() + ": " + e.what());
  }
  // Relative replay files are resolved next to the spec.
  if (spec.backend.replay_file && spec.backend.replay_file->is_relative())
    spec.backend.replay_file = file.parent_path() / *spec.backend.replay_file;
  return spec;
}

void validate_experiment(const ExperimentSpec& spec, const CorpusStore& corpus) {
  const auto& support = corpus.get_support_set(spec.support_set_id);
  const auto& test = corpus.get_test_set(spec.test_set_id);
  if (support.rule != spec.rule)
    throw Error(ErrorCode::InvalidConfig, "support set '" + support.id + "' is for rule " +
                                              std::string(to_string(support.rule)) + ", spec says " +
                                              std::string(to_string(spec.rule)));
  if (test.rule != spec.rule)
    throw Error(ErrorCode::InvalidConfig, "test set '" + test.id + "' is for rule " +
                                              std::string(to_string(test.rule)) + ", spec says " +
                                              std::string(to_string(spec.rule)));
  std::set<std::string> inputs;
  for (const auto& p : support.pairs) inputs.insert(text::collapse_whitespace(p.input));
  for (const auto& id : test.requirement_ids) {
    const auto& req = corpus.get_requirement(id);
    if (inputs.count(text::collapse_whitespace(req.text)))
      throw Error(ErrorCode::DisjointnessViolation,
                  "test requirement '" + id + "' appears in support set '" + support.id + "'");
  }
}

void ClassHistogram::add(GradeClass grade) noexcept {
  ++counts[static_cast<std::size_t>(grade.value() - 1)];
  ++total;
}

std::size_t ClassHistogram::count(GradeClass grade) const noexcept {
  return counts[static_cast<std::size_t>(grade.value() - 1)];
}

bool ClassHistogram::conserved() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == total;
}

namespace {

struct RowOutcome {
  std::optional<GradedTranslation> graded;
  std::optional<RowFailure> failure;
};

RowOutcome run_row(std::size_t row, const Requirement& req, const ExperimentSpec& spec,
                   const SupportSet& set, const CorpusStore& corpus, GenerationBackend& backend,
                   const GraderConfig& grader) {
  RowOutcome out;
  TranslationResult result;
  try {
    result = translate_stage(req, req.text, spec.rule, set, backend);
  } catch (const Error& e) {
    if (!is_backend_error(e.code())) throw;
    out.failure = RowFailure{row, req.id, e.code(), e.what()};
    return out;
  }

  // Unlabelled rows fall back to the auto grade in every mode.
  auto automatic = grade_auto(result, grader);

  const RecordedOutput* label = nullptr;
  if (spec.grading != GradingMode::Auto) {
    label = corpus.find_recording(set.id, req.text);
    if (label && !label->human_class) label = nullptr;
  }
  if (!label) {
    out.graded = std::move(automatic);
    return out;
  }
  LabelRecord rec{set.id, req.text, std::nullopt, spec.rule, *label->human_class};
  auto graded = ingest_labels({rec}, {result}).front();
  if (spec.grading == GradingMode::Both) attach_auto_grade(graded, automatic);
  out.graded = std::move(graded);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const CorpusStore& corpus,
                                GenerationBackend* backend, const GraderConfig& grader) {
  validate_experiment(spec, corpus);
  const auto& set = corpus.get_support_set(spec.support_set_id);
  const auto& test = corpus.get_test_set(spec.test_set_id);

  std::unique_ptr<GenerationBackend> owned;
  if (!backend) {
    owned = make_backend(spec.backend, corpus.recordings());
    backend = owned.get();
  }

  const auto n = test.requirement_ids.size();
  std::vector<RowOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        outcomes[k] = run_row(k, corpus.get_requirement(test.requirement_ids[k]), spec, set, corpus,
                              *backend, grader);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  const auto workers = std::min(n, std::max<std::size_t>(1, spec.backend.max_parallel));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentResult result;
  result.spec = spec;
  result.support_size = set.size();
  result.support_label = set.label;
  std::size_t labelled = 0;
  std::size_t agreeing = 0;
  // Deterministic fold in row order.
  for (auto& o : outcomes) {
    if (o.failure) {
      ++result.histogram.failed;
      result.failures.push_back(std::move(*o.failure));
      continue;
    }
    auto& g = *o.graded;
    result.histogram.add(g.grade);
    if (spec.grading == GradingMode::Both && g.provenance == GradeProvenance::HumanLabel &&
        g.auto_grade) {
      ++labelled;
      agreeing += *g.auto_grade == g.grade ? 1 : 0;
    }
    result.rows.push_back(std::move(g));
  }
  if (spec.grading == GradingMode::Both && labelled > 0)
    result.agreement = static_cast<double>(agreeing) / static_cast<double>(labelled);
  return result;
}

namespace {

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string format_fraction(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(3) << v;
  return ss.str();
}

}  // namespace

std::string emit_report(const std::vector<ExperimentResult>& results, ReportFormat format) {
  if (format == ReportFormat::Machine) {
    std::string out;
    for (const auto& r : results) {
      out += report_record(r).dump();
      out.push_back('\n');
    }
    return out;
  }

  const bool any_failed = std::any_of(results.begin(), results.end(),
                                      [](const auto& r) { return r.histogram.failed > 0; });
  const bool any_agreement = std::any_of(results.begin(), results.end(),
                                         [](const auto& r) { return r.agreement.has_value(); });
  std::size_t first = std::string_view("# of Training Set").size();
  for (const auto& r : results)
    first = std::max(first, r.support_label.value_or(std::to_string(r.support_size)).size());
  first += 2;
  constexpr std::size_t kCell = 9;

  std::string header = pad_right("# of Training Set", first);
  for (int c = 1; c <= 6; ++c) header += pad_left("Class " + std::to_string(c), kCell);
  header += pad_left("total", kCell);
  if (any_failed) header += pad_left("failed", kCell);
  if (any_agreement) header += pad_left("agreement", kCell + 2);
  std::string out = header + "\n";
  const std::string rule_line(header.size(), '-');

  for (auto rule : kAllRules) {
    bool opened = false;
    for (const auto& r : results) {
      if (r.spec.rule != rule) continue;
      if (!opened) {
        out += rule_line + "\n" + std::string(display_name(rule)) + "\n";
        opened = true;
      }
      std::string line =
          pad_right(r.support_label.value_or(std::to_string(r.support_size)), first);
      for (auto count : r.histogram.counts) line += pad_left(std::to_string(count), kCell);
      line += pad_left(std::to_string(r.histogram.total), kCell);
      if (any_failed) line += pad_left(std::to_string(r.histogram.failed), kCell);
      if (any_agreement)
        line += pad_left(r.agreement ? format_fraction(*r.agreement) : "-", kCell + 2);
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace reqdsl
