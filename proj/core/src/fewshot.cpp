#include "reqdsl/fewshot.hpp"

#include <openssl/evp.h>

#include <array>

#include "reqdsl/dsl.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/text.hpp"

namespace reqdsl {

std::string_view to_string(SupportProvenance p) noexcept {
  return p == SupportProvenance::PaperFixture ? "paper_fixture" : "user";
}

std::optional<SupportProvenance> parse_support_provenance(std::string_view name) {
  if (name == "paper_fixture") return SupportProvenance::PaperFixture;
  if (name == "user") return SupportProvenance::User;
  return std::nullopt;
}

void validate_support_set(const SupportSet& set, const Lexicon& lexicon) {
  if (set.pairs.empty())
    throw Error(ErrorCode::EmptySupportSet, "support set '" + set.id + "' has no pairs");
  if (text::trim(set.id).empty()) throw Error(ErrorCode::InvalidSupportSet, "support set without id");
  for (std::size_t k = 0; k < set.pairs.size(); ++k) {
    const auto& p = set.pairs[k];
    const auto where = "support set '" + set.id + "' pair " + std::to_string(k + 1);
    if (text::trim(p.input).empty() || text::trim(p.dsl).empty())
      throw Error(ErrorCode::InvalidSupportSet, where + ": blank input or dsl");
    const auto verdict = rule_conformance(set.rule, p.dsl, lexicon);
    if (verdict != Severity::Conformant)
      throw Error(ErrorCode::InvalidSupportSet,
                  where + ": dsl is " + std::string(to_string(verdict)) + " under " +
                      std::string(to_string(set.rule)));
  }
}

std::string build_prompt(const SupportSet& set, std::string_view query) {
  if (set.pairs.empty())
    throw Error(ErrorCode::EmptySupportSet, "support set '" + set.id + "' has no pairs");
  std::string out;
  for (const auto& p : set.pairs) {
    out += kInstructionLine;
    out += "\nInput: ";
    out += p.input;
    out += "\nDSL: ";
    out += p.dsl;
    out += kPairSeparator;
  }
  out += kInstructionLine;
  out += "\nInput: ";
  out += query;
  out += "\nDSL:";
  return out;
}

std::string prompt_hash(std::string_view prompt) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(prompt.data(), prompt.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int k = 0; k < len; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xF]);
  }
  return hex;
}

std::string mock_translate(RuleKind rule, std::string_view text, const Lexicon& lexicon) {
  std::vector<Diagnostic> edits;
  for (auto& d : check_rule(rule, text, lexicon))
    if (d.fix_hint && (d.severity == Severity::Violation || d.severity == Severity::Minor))
      edits.push_back(std::move(d));
  if (edits.empty()) return std::string(text);
  return apply_fix_hints(text, edits);
}

}  // namespace reqdsl
