// reqdsl: lint, translate and evaluate requirements from the command line.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "reqdsl/reqdsl.hpp"
#include "reqdsl/json_io.hpp"

namespace fs = std::filesystem;
using namespace reqdsl;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kBackend = 3 };

fs::path default_corpus() {
  if (const char* env = std::getenv("REQDSL_CORPUS")) return env;
  return REQDSL_DEFAULT_CORPUS;
}

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Requirement records (.jsonl) or one requirement per non-blank line.
std::vector<Requirement> read_requirements(const std::string& path) {
  const auto content = read_input(path);
  const bool records = path.size() > 6 && path.substr(path.size() - 6) == ".jsonl";
  std::vector<Requirement> out;
  std::istringstream in(content);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    if (records) {
      try {
        out.push_back(requirement_from_json(Json::parse(line)));
      } catch (const Json::parse_error& e) {
        throw MalformedRecordError(path, n, "(record)", e.what());
      } catch (const Error& e) {
        throw MalformedRecordError(path, n, "(record)", e.what());
      }
    } else {
      Requirement r;
      r.id = "line-" + std::to_string(n);
      r.text = std::string(text::trim(line));
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string describe(const Diagnostic& d, std::string_view text) {
  std::string out = std::string(to_string(d.severity)) + " " + std::string(to_string(d.rule)) + "/" +
                    d.code + " [" + std::to_string(d.span.begin) + "," + std::to_string(d.span.end) +
                    ") " + d.message;
  if (d.span.end <= text.size() && !d.span.empty())
    out += ": \"" + std::string(text.substr(d.span.begin, d.span.size())) + "\"";
  if (d.fix_hint) out += " -> \"" + *d.fix_hint + "\"";
  return out;
}

GenerationBackendConfig backend_config(const std::string& kind, const std::string& url) {
  auto cfg = config_from_env();
  if (!kind.empty()) {
    auto k = parse_backend_kind(kind);
    if (!k) throw CLI::ValidationError("--backend", "unknown backend '" + kind + "'");
    cfg.kind = *k;
  }
  if (!url.empty()) cfg.endpoint_url = url;
  cfg.validate();
  return cfg;
}

RuleKind rule_option(const std::string& name) {
  auto r = parse_rule_kind(name);
  if (!r) throw CLI::ValidationError("--rule", "unknown rule '" + name + "'");
  return *r;
}

std::atomic<Service*> g_service{nullptr};

void on_signal(int) {
  if (auto* s = g_service.load()) s->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controlled-language requirements toolkit"};
  app.require_subcommand(1);
  std::string format = "text";

  // validate
  auto* validate = app.add_subcommand("validate", "Check requirements against the DSL rules");
  std::string validate_input;
  std::string validate_rule;
  bool strict = false;
  validate->add_option("input", validate_input, "File (.jsonl records or one per line), or -")->required();
  validate->add_option("--rule", validate_rule, "Only this rule (if_then, modal_verb, expression)");
  validate->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  validate->add_flag("--strict", strict, "Exit 2 when any rule is violated");

  // translate
  auto* translate_cmd = app.add_subcommand("translate", "Translate requirements with a few-shot backend");
  std::string tr_rule;
  std::string tr_set;
  std::string tr_backend;
  std::string tr_url;
  std::string tr_input = "-";
  std::string tr_text;
  fs::path corpus_dir = default_corpus();
  translate_cmd->add_option("--rule", tr_rule, "Target rule")->required();
  translate_cmd->add_option("--set", tr_set, "Support set id (default: largest set for the rule)");
  translate_cmd->add_option("--backend", tr_backend, "mock, replay or http");
  translate_cmd->add_option("--url", tr_url, "Endpoint for the http backend");
  translate_cmd->add_option("--text", tr_text, "Translate this text instead of reading input");
  translate_cmd->add_option("input", tr_input, "File or - (default)");
  translate_cmd->add_option("--corpus", corpus_dir, "Corpus directory");
  translate_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // extract
  auto* extract = app.add_subcommand("extract", "Extract comparison constraints");
  std::string ex_input;
  std::string ex_style = "math";
  extract->add_option("input", ex_input, "File or -")->required();
  extract->add_option("--style", ex_style, "math or keyword")->check(CLI::IsMember({"math", "keyword"}));
  extract->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // check-consistency
  auto* consistency = app.add_subcommand("check-consistency", "Find contradicting bounds in a corpus");
  std::string cc_input;
  bool cc_fail = false;
  consistency->add_option("corpus", cc_input, "Corpus directory or requirements file")->required();
  consistency->add_flag("--fail-on-contradiction", cc_fail, "Exit 2 when a contradiction is found");
  consistency->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run experiment specs and report class histograms");
  std::vector<std::string> specs;
  std::string ex_grading;
  std::string ex_backend;
  std::string ex_format = "table";
  experiment->add_option("--spec", specs, "Experiment spec file (repeatable)")->required();
  experiment->add_option("--corpus", corpus_dir, "Corpus directory");
  experiment->add_option("--grading", ex_grading, "Override: auto, labels or both");
  experiment->add_option("--backend", ex_backend, "Override the backend kind");
  experiment->add_option("--format", ex_format, "table or machine")->check(CLI::IsMember({"table", "machine"}));

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Load, save or list a corpus");
  corpus_cmd->require_subcommand(1);
  auto* corpus_load = corpus_cmd->add_subcommand("load", "Load and verify a corpus directory");
  std::string c_dir;
  corpus_load->add_option("dir", c_dir, "Corpus directory")->required();
  auto* corpus_save = corpus_cmd->add_subcommand("save", "Load a corpus and write it to another directory");
  std::string c_dst;
  corpus_save->add_option("src", c_dir, "Source corpus")->required();
  corpus_save->add_option("dst", c_dst, "Destination directory")->required();
  auto* corpus_list = corpus_cmd->add_subcommand("list", "List records of one kind");
  std::string c_kind = "requirements";
  corpus_list->add_option("dir", c_dir, "Corpus directory")->required();
  corpus_list->add_option("--kind", c_kind, "requirements, support-sets, test-sets or recordings")
      ->check(CLI::IsMember({"requirements", "support-sets", "test-sets", "recordings"}));

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string host = "127.0.0.1";
  int port = 8642;
  std::string sv_backend;
  std::string sv_url;
  bool persist = false;
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--corpus", corpus_dir, "Corpus directory");
  serve->add_option("--backend", sv_backend, "mock, replay or http");
  serve->add_option("--url", sv_url, "Endpoint for the http backend");
  serve->add_flag("--persist", persist, "Write corpus changes back to --corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) {
      std::optional<RuleKind> only;
      if (!validate_rule.empty()) only = rule_option(validate_rule);
      bool violated = false;
      for (const auto& req : read_requirements(validate_input)) {
        const auto a = analyze(req);
        for (auto rule : kAllRules)
          if ((!only || *only == rule) && a.classification.count(rule) &&
              rule_conformance(rule, req.text) == Severity::Violation)
            violated = true;
        if (format == "json") {
          std::cout << validation_report(req).dump() << "\n";
          continue;
        }
        std::cout << req.id << ": " << req.text << "\n";
        for (auto rule : kAllRules) {
          if (only && *only != rule) continue;
          const auto verdict = rule_conformance(rule, req.text);
          const bool applies = verdict == Severity::Conformant || a.classification.count(rule) > 0;
          std::cout << "  " << to_string(rule) << ": "
                    << (applies ? to_string(verdict) : std::string_view("not applicable")) << "\n";
          if (!applies) continue;
          for (const auto& d : a.per_rule.at(rule))
            if (d.severity != Severity::Conformant) std::cout << "    " << describe(d, req.text) << "\n";
        }
      }
      return strict && violated ? kData : kOk;
    }

    if (*translate_cmd) {
      const auto rule = rule_option(tr_rule);
      const auto corpus = load_corpus(corpus_dir);
      SupportSetRegistry registry(corpus.support_sets());
      const auto& set = tr_set.empty() ? registry.default_for(rule) : registry.get(tr_set);
      auto backend = make_backend(backend_config(tr_backend, tr_url), corpus.recordings());
      std::vector<Requirement> reqs;
      if (!tr_text.empty())
        reqs.push_back({"text", tr_text, RequirementSource::Legacy, {}});
      else
        reqs = read_requirements(tr_input);
      int status = kOk;
      for (const auto& req : reqs) {
        try {
          const auto r = translate_stage(req, req.text, rule, set, *backend);
          if (format == "json") {
            Json j = r;
            j["auto_grade"] = grade_auto(r).grade.value();
            std::cout << j.dump() << "\n";
          } else {
            std::cout << r.output << "\n";
          }
        } catch (const Error& e) {
          if (!is_backend_error(e.code())) throw;
          std::cerr << "reqdsl: " << req.id << ": " << to_string(e.code()) << ": " << e.what() << "\n";
          status = kBackend;
        }
      }
      return status;
    }

    if (*extract) {
      const auto style = ex_style == "keyword" ? FormulaStyle::Keyword : FormulaStyle::Mathematical;
      for (const auto& req : read_requirements(ex_input)) {
        const auto ex = extract_constraints_detailed(req);
        if (format == "json") {
          std::cout << Json{{"requirement_id", req.id},
                            {"constraints", ex.constraints},
                            {"diagnostics", ex.diagnostics}}
                           .dump()
                    << "\n";
          continue;
        }
        for (const auto& c : ex.constraints) std::cout << req.id << ": " << render_formula(c, style) << "\n";
        for (const auto& d : ex.diagnostics) std::cout << req.id << ": note: " << d.message << "\n";
      }
      return kOk;
    }

    if (*consistency) {
      const auto reqs = fs::is_directory(cc_input) ? load_corpus(cc_input).requirements()
                                                   : read_requirements(cc_input);
      std::vector<Constraint> constraints;
      for (const auto& r : reqs)
        for (auto& c : extract_constraints(r)) constraints.push_back(std::move(c));
      const auto findings = check_consistency(constraints);
      bool contradiction = false;
      for (const auto& f : findings) {
        contradiction = contradiction || f.kind == FindingKind::Contradiction;
        if (format == "json") {
          std::cout << Json(f).dump() << "\n";
          continue;
        }
        std::cout << to_string(f.kind) << ": " << f.explanation << "\n";
        for (const auto& c : f.constraints)
          std::cout << "  " << c.source_requirement << ": "
                    << render_formula(c, FormulaStyle::Mathematical) << "\n";
      }
      if (format == "text" && findings.empty()) std::cout << "no findings\n";
      return cc_fail && contradiction ? kData : kOk;
    }

    if (*experiment) {
      const auto corpus = load_corpus(corpus_dir);
      std::vector<ExperimentResult> results;
      int status = kOk;
      for (const auto& path : specs) {
        auto spec = load_experiment_spec(path);
        if (!ex_grading.empty()) {
          auto g = parse_grading_mode(ex_grading);
          if (!g) throw CLI::ValidationError("--grading", "unknown mode '" + ex_grading + "'");
          spec.grading = *g;
        }
        if (!ex_backend.empty()) spec.backend = backend_config(ex_backend, "");
        results.push_back(run_experiment(spec, corpus));
        for (const auto& f : results.back().failures) {
          std::cerr << "reqdsl: " << spec.name << " row " << f.row << " (" << f.requirement_id
                    << "): " << to_string(f.code) << ": " << f.message << "\n";
          status = kBackend;
        }
      }
      std::cout << emit_report(results, ex_format == "machine" ? ReportFormat::Machine
                                                               : ReportFormat::TableText);
      return status;
    }

    if (*corpus_cmd) {
      const auto corpus = load_corpus(c_dir);
      if (*corpus_load) {
        std::cout << "requirements " << corpus.requirements().size() << "\n"
                  << "support_sets " << corpus.support_sets().size() << "\n"
                  << "test_sets " << corpus.test_sets().size() << "\n"
                  << "recordings " << corpus.recordings().size() << "\n";
        for (const auto& t : corpus.test_sets())
          std::cout << "test_set " << t.id << " " << t.requirement_ids.size() << "\n";
      } else if (*corpus_save) {
        save_corpus(corpus, c_dst);
        if (!(load_corpus(c_dst) == corpus))
          throw Error(ErrorCode::Io, "saved corpus does not load back equal");
        std::cout << "saved to " << c_dst << "\n";
      } else if (c_kind == "requirements") {
        for (const auto& r : corpus.requirements()) std::cout << r.id << "\t" << r.text << "\n";
      } else if (c_kind == "support-sets") {
        for (const auto& s : corpus.support_sets())
          std::cout << s.id << "\t" << to_string(s.rule) << "\t" << s.size() << "\t"
                    << s.label.value_or("") << "\n";
      } else if (c_kind == "test-sets") {
        for (const auto& t : corpus.test_sets())
          std::cout << t.id << "\t" << to_string(t.rule) << "\t" << t.requirement_ids.size() << "\n";
      } else {
        for (const auto& r : corpus.recordings())
          std::cout << r.support_set_id << "\t"
                    << (r.human_class ? std::to_string(*r.human_class) : "-") << "\t" << r.query
                    << "\n";
      }
      return kOk;
    }

    if (*serve) {
      ServiceConfig cfg;
      cfg.host = host;
      cfg.port = port;
      if (const char* token = std::getenv("REQDSL_TOKEN"); token && *token) cfg.token = token;
      cfg.backend = backend_config(sv_backend, sv_url);
      if (persist) cfg.corpus_dir = corpus_dir;
      Service service(cfg, load_corpus(corpus_dir));
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "reqdsl: serving on " << host << ":" << port << "\n";
      const bool ok = service.run();
      g_service = nullptr;
      if (!ok) {
        std::cerr << "reqdsl: cannot bind " << host << ":" << port << "\n";
        return kData;
      }
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "reqdsl: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "reqdsl: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_backend_error(e.code()) ? kBackend : kData;
  } catch (const std::exception& e) {
    std::cerr << "reqdsl: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
