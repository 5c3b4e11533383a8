#pragma once

// JSON encodings shared by the corpus files, the CLI and the service.
// Field names are snake_case; enums use their to_string names.

#include <nlohmann/json.hpp>

#include "reqdsl/backend.hpp"
#include "reqdsl/constraints.hpp"
#include "reqdsl/corpus.hpp"
#include "reqdsl/dsl.hpp"
#include "reqdsl/experiment.hpp"
#include "reqdsl/fewshot.hpp"
#include "reqdsl/grader.hpp"
#include "reqdsl/translate.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

using Json = nlohmann::json;

void to_json(Json& j, const Span& s);
void to_json(Json& j, const Diagnostic& d);
void to_json(Json& j, const Requirement& r);
void to_json(Json& j, const SupportPair& p);
void to_json(Json& j, const SupportSet& s);
void to_json(Json& j, const TestSet& t);
void to_json(Json& j, const RecordedOutput& r);
void to_json(Json& j, const Constraint& c);
void to_json(Json& j, const ConsistencyFinding& f);
void to_json(Json& j, const IfThenReq& r);
void to_json(Json& j, const DslDocumentAnalysis& a);
void to_json(Json& j, const TranslationResult& r);
void to_json(Json& j, const GradedTranslation& g);
void to_json(Json& j, const ClassHistogram& h);

/// Decoders throw Error(InvalidConfig) naming the offending field.
Requirement requirement_from_json(const Json& j);
SupportSet support_set_from_json(const Json& j);
GenerationBackendConfig backend_config_from_json(const Json& j,
                                                 GenerationBackendConfig base = {});
ExperimentSpec experiment_spec_from_json(const Json& j);

/// analyze() output plus a per-rule "conformance" verdict map.
Json validation_report(const Requirement& req);

/// The machine report line for one experiment.
nlohmann::ordered_json report_record(const ExperimentResult& r);

}  // namespace reqdsl
