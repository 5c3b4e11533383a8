#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqdsl/lexicon.hpp"
#include "reqdsl/types.hpp"

namespace reqdsl {

enum class BackendKind { Http, Mock, Replay };

std::string_view to_string(BackendKind kind) noexcept;
std::optional<BackendKind> parse_backend_kind(std::string_view name);

/// Field names of a completion-style inference server.
struct HttpWireFormat {
  std::string path = "/v1/completions";
  std::string prompt_field = "prompt";
  std::string max_tokens_field = "max_tokens";
  std::string stop_field = "stop";
  /// JSON pointer to the continuation text in the response.
  std::string response_pointer = "/choices/0/text";
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
};

std::vector<std::string> default_stop_sequences();

struct GenerationBackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> api_key;
  std::chrono::milliseconds timeout{30000};
  int max_output_tokens = 256;
  std::vector<std::string> stop_sequences = default_stop_sequences();
  /// Passed through verbatim to the http backend.
  nlohmann::json decoding_params = {{"temperature", 0.0}};
  HttpWireFormat wire;
  std::size_t max_parallel = 4;
  /// Recorded outputs for the replay backend; defaults to the corpus.
  std::optional<std::filesystem::path> replay_file;

  /// Throws Error(InvalidConfig) when the invariants do not hold.
  void validate() const;
};

/// Overrides fields from REQDSL_BACKEND_KIND, REQDSL_BACKEND_URL,
/// REQDSL_API_KEY, REQDSL_TIMEOUT_MS and REQDSL_MAX_PARALLEL.
GenerationBackendConfig config_from_env(GenerationBackendConfig base = {});

struct GenerationRequest {
  std::string prompt;
  RuleKind rule = RuleKind::IfThen;
  std::string support_set_id;
  std::string query;
};

struct RecordedOutput {
  std::string support_set_id;
  std::string query;
  std::string output;
  std::optional<int> human_class;

  bool operator==(const RecordedOutput&) const = default;
};

/// Cuts at the earliest stop sequence and drops leading whitespace.
std::string truncate_at_stop(std::string_view raw, const std::vector<std::string>& stops);

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  /// Raw continuation truncated at the first stop sequence. Throws Error
  /// with a backend error code on failure.
  std::string generate(const GenerationRequest& request);

  virtual BackendKind kind() const noexcept = 0;

 protected:
  explicit GenerationBackend(std::vector<std::string> stops) : stops_(std::move(stops)) {}

 private:
  virtual std::string do_generate(const GenerationRequest& request) = 0;

  std::vector<std::string> stops_;
};

class MockBackend final : public GenerationBackend {
 public:
  explicit MockBackend(const Lexicon& lexicon = Lexicon::builtin(),
                       std::vector<std::string> stops = default_stop_sequences());
  BackendKind kind() const noexcept override { return BackendKind::Mock; }

 private:
  std::string do_generate(const GenerationRequest& request) override;
  const Lexicon& lexicon_;
};

class ReplayBackend final : public GenerationBackend {
 public:
  explicit ReplayBackend(std::vector<RecordedOutput> recordings,
                         std::vector<std::string> stops = default_stop_sequences());
  BackendKind kind() const noexcept override { return BackendKind::Replay; }

 private:
  std::string do_generate(const GenerationRequest& request) override;
  std::vector<RecordedOutput> recordings_;
};

class HttpBackend final : public GenerationBackend {
 public:
  explicit HttpBackend(GenerationBackendConfig config);
  BackendKind kind() const noexcept override { return BackendKind::Http; }

 private:
  std::string do_generate(const GenerationRequest& request) override;
  std::string request_once(const GenerationRequest& request);
  GenerationBackendConfig config_;
};

/// Caps the number of in-flight requests to a shared backend.
class BoundedBackend final : public GenerationBackend {
 public:
  BoundedBackend(std::shared_ptr<GenerationBackend> inner, std::size_t max_in_flight);
  BackendKind kind() const noexcept override { return inner_->kind(); }

 private:
  std::string do_generate(const GenerationRequest& request) override;
  std::shared_ptr<GenerationBackend> inner_;
  std::counting_semaphore<1024> slots_;
};

/// Builds the backend a config describes. Replay uses `recordings` unless
/// the config names a replay file.
std::unique_ptr<GenerationBackend> make_backend(const GenerationBackendConfig& config,
                                                std::vector<RecordedOutput> recordings = {});

}  // namespace reqdsl
