#include "reqdsl/json_io.hpp"

namespace reqdsl {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, "field '" + field + "': " + why);
}

const Json& require(const Json& j, const char* field) {
  if (!j.is_object()) bad(field, "expected an object");
  auto it = j.find(field);
  if (it == j.end()) bad(field, "missing");
  return *it;
}

std::string require_string(const Json& j, const char* field) {
  const auto& v = require(j, field);
  if (!v.is_string()) bad(field, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad(field, "expected a string");
  return it->get<std::string>();
}

RuleKind require_rule(const Json& j, const char* field) {
  const auto name = require_string(j, field);
  auto rule = parse_rule_kind(name);
  if (!rule) bad(field, "unknown rule '" + name + "'");
  return *rule;
}

}  // namespace

void to_json(Json& j, const Span& s) { j = Json{{"begin", s.begin}, {"end", s.end}}; }

void to_json(Json& j, const Diagnostic& d) {
  j = Json{{"rule", to_string(d.rule)},
           {"severity", to_string(d.severity)},
           {"span", d.span},
           {"code", d.code},
           {"message", d.message}};
  if (d.fix_hint) j["fix_hint"] = *d.fix_hint;
}

void to_json(Json& j, const Requirement& r) {
  j = Json{{"id", r.id}, {"text", r.text}, {"source", to_string(r.source)}, {"tags", r.tags}};
}

void to_json(Json& j, const SupportPair& p) { j = Json{{"input", p.input}, {"dsl", p.dsl}}; }

void to_json(Json& j, const SupportSet& s) {
  j = Json{{"id", s.id},
           {"rule", to_string(s.rule)},
           {"provenance", to_string(s.provenance)},
           {"size", s.size()},
           {"pairs", s.pairs}};
  if (s.label) j["label"] = *s.label;
}

void to_json(Json& j, const TestSet& t) {
  j = Json{{"id", t.id}, {"rule", to_string(t.rule)}, {"requirement_ids", t.requirement_ids}};
}

void to_json(Json& j, const RecordedOutput& r) {
  j = Json{{"support_set_id", r.support_set_id}, {"query", r.query}, {"output", r.output}};
  if (r.human_class) j["human_class"] = *r.human_class;
}

void to_json(Json& j, const Constraint& c) {
  j = Json{{"variable", c.variable},
           {"op", math_form(c.op)},
           {"value", c.value.is_number() ? Json(c.value.number) : Json(c.value.text)},
           {"value_text", c.value.text},
           {"source_requirement", c.source_requirement},
           {"span", c.span},
           {"formula", render_formula(c, FormulaStyle::Mathematical)}};
  j["unit"] = c.unit ? Json(*c.unit) : Json(nullptr);
}

void to_json(Json& j, const ConsistencyFinding& f) {
  j = Json{{"kind", to_string(f.kind)},
           {"variable", f.variable},
           {"constraints", f.constraints},
           {"explanation", f.explanation}};
}

void to_json(Json& j, const IfThenReq& r) {
  j = Json{{"trigger", r.trigger}, {"action", r.action}};
}

void to_json(Json& j, const DslDocumentAnalysis& a) {
  Json per_rule = Json::object();
  for (const auto& [rule, diags] : a.per_rule) per_rule[std::string(to_string(rule))] = diags;
  Json classification = Json::array();
  for (auto rule : a.classification) classification.push_back(to_string(rule));
  j = Json{{"requirement_id", a.requirement_id},
           {"sentences", a.sentences},
           {"diagnostics", per_rule},
           {"constraints", a.constraints},
           {"classification", classification}};
  j["if_then"] = a.if_then ? Json(*a.if_then) : Json(nullptr);
}

Json validation_report(const Requirement& req) {
  Json out = analyze(req);
  Json conformance = Json::object();
  for (auto rule : kAllRules)
    conformance[std::string(to_string(rule))] = to_string(rule_conformance(rule, req.text));
  out["conformance"] = conformance;
  return out;
}

void to_json(Json& j, const TranslationResult& r) {
  j = Json{{"requirement_id", r.source.id},
           {"rule", to_string(r.rule)},
           {"query", r.query},
           {"output", r.output},
           {"backend", to_string(r.backend_kind)},
           {"support_set_id", r.support_set_id},
           {"prompt_hash", r.prompt_hash},
           {"latency_us", r.latency.count()}};
}

void to_json(Json& j, const GradedTranslation& g) {
  j = Json{{"result", g.result},
           {"grade", g.grade.value()},
           {"provenance", to_string(g.provenance)},
           {"evidence", g.evidence}};
  if (g.auto_grade) j["auto_grade"] = g.auto_grade->value();
}

void to_json(Json& j, const ClassHistogram& h) {
  j = Json{{"class_counts", h.counts}, {"total", h.total}, {"failed", h.failed}};
}

Requirement requirement_from_json(const Json& j) {
  Requirement r;
  r.id = require_string(j, "id");
  r.text = require_string(j, "text");
  if (auto src = optional_string(j, "source")) {
    auto parsed = parse_requirement_source(*src);
    if (!parsed) bad("source", "unknown source '" + *src + "'");
    r.source = *parsed;
  }
  if (auto it = j.find("tags"); it != j.end()) {
    if (!it->is_array()) bad("tags", "expected an array of strings");
    for (const auto& t : *it) {
      if (!t.is_string()) bad("tags", "expected an array of strings");
      r.tags.push_back(t.get<std::string>());
    }
  }
  return r;
}

SupportSet support_set_from_json(const Json& j) {
  SupportSet s;
  s.id = require_string(j, "id");
  s.rule = require_rule(j, "rule");
  if (auto p = optional_string(j, "provenance")) {
    auto parsed = parse_support_provenance(*p);
    if (!parsed) bad("provenance", "unknown provenance '" + *p + "'");
    s.provenance = *parsed;
  }
  s.label = optional_string(j, "label");
  const auto& pairs = require(j, "pairs");
  if (!pairs.is_array()) bad("pairs", "expected an array");
  for (const auto& p : pairs) s.pairs.push_back({require_string(p, "input"), require_string(p, "dsl")});
  return s;
}

GenerationBackendConfig backend_config_from_json(const Json& j, GenerationBackendConfig base) {
  if (!j.is_object()) bad("backend", "expected an object");
  if (auto kind = optional_string(j, "kind")) {
    auto parsed = parse_backend_kind(*kind);
    if (!parsed) bad("kind", "unknown backend '" + *kind + "'");
    base.kind = *parsed;
  }
  if (auto v = optional_string(j, "endpoint_url")) base.endpoint_url = v;
  if (auto v = optional_string(j, "api_key")) base.api_key = v;
  auto integer = [&](const char* field) -> std::optional<long long> {
    auto it = j.find(field);
    if (it == j.end()) return std::nullopt;
    if (!it->is_number_integer()) bad(field, "expected an integer");
    return it->get<long long>();
  };
  if (auto v = integer("timeout_ms")) base.timeout = std::chrono::milliseconds(*v);
  if (auto v = integer("max_output_tokens")) base.max_output_tokens = static_cast<int>(*v);
  if (auto v = integer("max_parallel")) {
    if (*v < 0) bad("max_parallel", "must be positive");
    base.max_parallel = static_cast<std::size_t>(*v);
  }
  if (auto it = j.find("stop_sequences"); it != j.end()) {
    if (!it->is_array()) bad("stop_sequences", "expected an array of strings");
    base.stop_sequences.clear();
    for (const auto& s : *it) {
      if (!s.is_string()) bad("stop_sequences", "expected an array of strings");
      base.stop_sequences.push_back(s.get<std::string>());
    }
  }
  if (auto it = j.find("decoding_params"); it != j.end()) {
    if (!it->is_object()) bad("decoding_params", "expected an object");
    base.decoding_params = *it;
  }
  if (auto v = optional_string(j, "replay_file")) base.replay_file = *v;
  base.validate();
  return base;
}

ExperimentSpec experiment_spec_from_json(const Json& j) {
  ExperimentSpec s;
  s.name = require_string(j, "name");
  s.rule = require_rule(j, "rule");
  s.support_set_id = require_string(j, "support_set_id");
  s.test_set_id = require_string(j, "test_set_id");
  if (auto it = j.find("backend"); it != j.end()) s.backend = backend_config_from_json(*it);
  if (auto g = optional_string(j, "grading")) {
    auto parsed = parse_grading_mode(*g);
    if (!parsed) bad("grading", "unknown grading mode '" + *g + "'");
    s.grading = *parsed;
  }
  return s;
}

nlohmann::ordered_json report_record(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["rule"] = to_string(r.spec.rule);
  j["support_size"] = r.support_size;
  if (r.support_label) j["label"] = *r.support_label;
  j["class_counts"] = r.histogram.counts;
  j["total"] = r.histogram.total;
  if (r.agreement) j["agreement"] = *r.agreement;
  if (r.histogram.failed > 0) j["failed"] = r.histogram.failed;
  return j;
}

}  // namespace reqdsl
