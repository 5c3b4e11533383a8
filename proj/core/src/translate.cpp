#include "reqdsl/translate.hpp"

#include <algorithm>

namespace reqdsl {

SupportSetRegistry::SupportSetRegistry(const std::vector<SupportSet>& sets) {
  for (const auto& s : sets) add(s);
}

void SupportSetRegistry::add(SupportSet set) {
  if (find(set.id)) throw Error(ErrorCode::DuplicateId, "duplicate support set id '" + set.id + "'");
  sets_.push_back(std::move(set));
}

const SupportSet* SupportSetRegistry::find(std::string_view id) const {
  for (const auto& s : sets_)
    if (s.id == id) return &s;
  return nullptr;
}

const SupportSet& SupportSetRegistry::get(std::string_view id) const {
  if (const auto* s = find(id)) return *s;
  throw Error(ErrorCode::UnknownSupportSet, "unknown support set '" + std::string(id) + "'");
}

const SupportSet& SupportSetRegistry::default_for(RuleKind rule,
                                                  std::optional<std::size_t> size) const {
  const SupportSet* best = nullptr;
  for (const auto& s : sets_) {
    if (s.rule != rule) continue;
    if (size) {
      if (s.size() == *size) return s;
    } else if (!best || s.size() > best->size()) {
      best = &s;
    }
  }
  if (best) return *best;
  throw Error(ErrorCode::UnknownSupportSet,
              "no support set for rule " + std::string(to_string(rule)) +
                  (size ? " with " + std::to_string(*size) + " pairs" : std::string()));
}

SetSelector make_selector(const SupportSetRegistry& registry,
                          std::map<RuleKind, std::string> explicit_ids) {
  return [&registry, ids = std::move(explicit_ids)](RuleKind rule) -> const SupportSet& {
    if (auto it = ids.find(rule); it != ids.end()) {
      const auto& set = registry.get(it->second);
      if (set.rule != rule)
        throw Error(ErrorCode::InvalidConfig, "support set '" + set.id + "' is for rule " +
                                                  std::string(to_string(set.rule)) + ", not " +
                                                  std::string(to_string(rule)));
      return set;
    }
    return registry.default_for(rule);
  };
}

StageError::StageError(const Error& cause, std::size_t stage, RuleKind rule)
    : Error(cause.code(), "stage " + std::to_string(stage) + " (" +
                              std::string(to_string(rule)) + "): " + cause.what()),
      stage_(stage),
      rule_(rule) {}

TranslationResult translate_stage(const Requirement& source, std::string_view query, RuleKind rule,
                                  const SupportSet& set, GenerationBackend& backend) {
  TranslationResult r;
  r.source = source;
  r.rule = rule;
  r.query = std::string(query);
  r.backend_kind = backend.kind();
  r.support_set_id = set.id;
  GenerationRequest request{build_prompt(set, query), rule, set.id, r.query};
  r.prompt_hash = prompt_hash(request.prompt);
  const auto start = std::chrono::steady_clock::now();
  r.output = backend.generate(request);
  r.latency = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::steady_clock::now() - start);
  return r;
}

std::vector<TranslationResult> translate(const Requirement& req, const std::vector<RuleKind>& rules,
                                         const SetSelector& select, GenerationBackend& backend) {
  std::vector<TranslationResult> out;
  std::string query = req.text;
  for (std::size_t k = 0; k < rules.size(); ++k) {
    try {
      out.push_back(translate_stage(req, query, rules[k], select(rules[k]), backend));
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(e, k + 1, rules[k]);
    }
    query = out.back().output;
  }
  return out;
}

}  // namespace reqdsl
