#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "reqdsl/backend.hpp"
#include "reqdsl/corpus.hpp"

namespace reqdsl {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  /// 0 binds an ephemeral port; see Service::port().
  int port = 8642;
  /// Static bearer token required on every request when set (REQDSL_TOKEN).
  std::optional<std::string> token;
  GenerationBackendConfig backend;
  /// When set, corpus mutations are persisted here.
  std::optional<std::filesystem::path> corpus_dir;
};

/// HTTP facade, all endpoints under /v1. Error responses are
/// {"error": {"code", "message", "detail"?}} with codes from a closed set.
class Service {
 public:
  Service(ServiceConfig config, CorpusStore corpus);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves on a background thread. Returns false if the
  /// address cannot be bound.
  bool start();
  /// Binds and serves on the calling thread until stop().
  bool run();
  void stop();
  /// Port actually bound (meaningful after start()).
  int port() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Closed set of error codes the service may return.
inline constexpr std::string_view kApiErrorCodes[] = {
    "parse_error",   "invalid_request", "unknown_set",     "unknown_id",   "duplicate_id",
    "backend_error", "backend_timeout", "unauthorized",    "not_found",    "internal_error"};

}  // namespace reqdsl
