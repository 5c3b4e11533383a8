#include "reqdsl/backend.hpp"

#include <httplib.h>

#include <cstdlib>

#include "reqdsl/corpus.hpp"
#include "reqdsl/error.hpp"
#include "reqdsl/fewshot.hpp"
#include "reqdsl/text.hpp"

namespace reqdsl {

std::string_view to_string(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::Http: return "http";
    case BackendKind::Mock: return "mock";
    case BackendKind::Replay: return "replay";
  }
  return "";
}

std::optional<BackendKind> parse_backend_kind(std::string_view name) {
  if (name == "http") return BackendKind::Http;
  if (name == "mock") return BackendKind::Mock;
  if (name == "replay") return BackendKind::Replay;
  return std::nullopt;
}

std::vector<std::string> default_stop_sequences() { return {"\n###", "\nInput:", "\n\n"}; }

void GenerationBackendConfig::validate() const {
  if (kind == BackendKind::Http && (!endpoint_url || endpoint_url->empty()))
    throw Error(ErrorCode::InvalidConfig, "http backend requires an endpoint url");
  if (stop_sequences.empty()) throw Error(ErrorCode::InvalidConfig, "stop sequences must not be empty");
  for (const auto& s : stop_sequences)
    if (s.empty()) throw Error(ErrorCode::InvalidConfig, "empty stop sequence");
  if (max_output_tokens <= 0) throw Error(ErrorCode::InvalidConfig, "max_output_tokens must be positive");
  if (timeout.count() <= 0) throw Error(ErrorCode::InvalidConfig, "timeout must be positive");
  if (max_parallel == 0) throw Error(ErrorCode::InvalidConfig, "max_parallel must be positive");
}

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

long parse_positive(const std::string& value, const char* name) {
  char* end = nullptr;
  const long n = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0' || n <= 0)
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be a positive integer");
  return n;
}

}  // namespace

GenerationBackendConfig config_from_env(GenerationBackendConfig base) {
  if (auto v = env("REQDSL_BACKEND_KIND")) {
    auto kind = parse_backend_kind(*v);
    if (!kind) throw Error(ErrorCode::InvalidConfig, "REQDSL_BACKEND_KIND: unknown kind '" + *v + "'");
    base.kind = *kind;
  }
  if (auto v = env("REQDSL_BACKEND_URL")) base.endpoint_url = *v;
  if (auto v = env("REQDSL_API_KEY")) base.api_key = *v;
  if (auto v = env("REQDSL_TIMEOUT_MS"))
    base.timeout = std::chrono::milliseconds(parse_positive(*v, "REQDSL_TIMEOUT_MS"));
  if (auto v = env("REQDSL_MAX_PARALLEL"))
    base.max_parallel = static_cast<std::size_t>(parse_positive(*v, "REQDSL_MAX_PARALLEL"));
  return base;
}

std::string truncate_at_stop(std::string_view raw, const std::vector<std::string>& stops) {
  std::size_t cut = raw.size();
  for (const auto& s : stops) {
    if (s.empty()) continue;
    const auto at = raw.find(s);
    if (at != std::string_view::npos) cut = std::min(cut, at);
  }
  auto out = raw.substr(0, cut);
  while (!out.empty() && (out.front() == ' ' || out.front() == '\t' || out.front() == '\n' ||
                          out.front() == '\r'))
    out.remove_prefix(1);
  return std::string(out);
}

std::string GenerationBackend::generate(const GenerationRequest& request) {
  return truncate_at_stop(do_generate(request), stops_);
}

MockBackend::MockBackend(const Lexicon& lexicon, std::vector<std::string> stops)
    : GenerationBackend(std::move(stops)), lexicon_(lexicon) {}

std::string MockBackend::do_generate(const GenerationRequest& request) {
  return mock_translate(request.rule, request.query, lexicon_);
}

ReplayBackend::ReplayBackend(std::vector<RecordedOutput> recordings, std::vector<std::string> stops)
    : GenerationBackend(std::move(stops)), recordings_(std::move(recordings)) {}

std::string ReplayBackend::do_generate(const GenerationRequest& request) {
  const auto query = text::collapse_whitespace(request.query);
  for (const auto& r : recordings_)
    if (r.support_set_id == request.support_set_id && text::collapse_whitespace(r.query) == query)
      return r.output;
  throw Error(ErrorCode::ReplayMiss,
              "no recorded output for set '" + request.support_set_id + "' and query '" +
                  request.query + "'");
}

HttpBackend::HttpBackend(GenerationBackendConfig config)
    : GenerationBackend(config.stop_sequences), config_(std::move(config)) {
  config_.validate();
}

std::string HttpBackend::do_generate(const GenerationRequest& request) {
  try {
    return request_once(request);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Timeout) throw;
  }
  return request_once(request);  // one retry after a timeout
}

std::string HttpBackend::request_once(const GenerationRequest& request) {
  const auto& url = *config_.endpoint_url;
  // Split "scheme://host:port/prefix" into the client address and a path
  // prefix joined with the configured endpoint path.
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  const std::string origin = url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(origin);
  if (!client.is_valid())
    throw Error(ErrorCode::TransportError, "unsupported endpoint url '" + url + "'");
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  nlohmann::json body = config_.decoding_params.is_object() ? config_.decoding_params
                                                            : nlohmann::json::object();
  body[config_.wire.prompt_field] = request.prompt;
  body[config_.wire.max_tokens_field] = config_.max_output_tokens;
  body[config_.wire.stop_field] = config_.stop_sequences;

  httplib::Headers headers;
  if (config_.api_key)
    headers.emplace(config_.wire.auth_header, config_.wire.auth_prefix + *config_.api_key);

  auto res = client.Post(prefix + config_.wire.path, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
      throw Error(ErrorCode::Timeout, "backend request timed out: " + httplib::to_string(err));
    throw Error(ErrorCode::TransportError, "backend request failed: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300)
    throw Error(ErrorCode::BackendRejected,
                "backend returned status " + std::to_string(res->status));
  try {
    const auto reply = nlohmann::json::parse(res->body);
    const auto& text = reply.at(nlohmann::json::json_pointer(config_.wire.response_pointer));
    return text.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BackendRejected, std::string("malformed backend response: ") + e.what());
  }
}

BoundedBackend::BoundedBackend(std::shared_ptr<GenerationBackend> inner, std::size_t max_in_flight)
    : GenerationBackend({}),
      inner_(std::move(inner)),
      slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(max_in_flight, 1, 1024))) {}

std::string BoundedBackend::do_generate(const GenerationRequest& request) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};
  return inner_->generate(request);
}

std::unique_ptr<GenerationBackend> make_backend(const GenerationBackendConfig& config,
                                                std::vector<RecordedOutput> recordings) {
  config.validate();
  switch (config.kind) {
    case BackendKind::Mock: return std::make_unique<MockBackend>(Lexicon::builtin(), config.stop_sequences);
    case BackendKind::Replay:
      if (config.replay_file) recordings = load_recordings(*config.replay_file);
      return std::make_unique<ReplayBackend>(std::move(recordings), config.stop_sequences);
    case BackendKind::Http: return std::make_unique<HttpBackend>(config);
  }
  throw Error(ErrorCode::InvalidConfig, "unknown backend kind");
}

}  // namespace reqdsl
