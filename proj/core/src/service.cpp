#include "reqdsl/service.hpp"

#include <httplib.h>

#include <shared_mutex>
#include <thread>

#include "reqdsl/json_io.hpp"
#include "reqdsl/text.hpp"
#include "reqdsl/translate.hpp"

namespace reqdsl {

namespace {

/// An error that maps directly onto an API error response.
struct ApiError {
  int status;
  std::string code;
  std::string message;
  Json detail;
};

ApiError from_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::UnknownSupportSet: return {404, "unknown_set", e.what(), nullptr};
    case ErrorCode::UnknownId:
    case ErrorCode::DanglingReference: return {404, "unknown_id", e.what(), nullptr};
    case ErrorCode::DuplicateId: return {409, "duplicate_id", e.what(), nullptr};
    case ErrorCode::Timeout: return {504, "backend_timeout", e.what(), nullptr};
    case ErrorCode::TransportError:
    case ErrorCode::BackendRejected:
    case ErrorCode::ReplayMiss: return {502, "backend_error", e.what(), nullptr};
    case ErrorCode::Io: return {500, "internal_error", e.what(), nullptr};
    case ErrorCode::EmptySupportSet:
    case ErrorCode::InvalidSupportSet:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnknownClass:
    case ErrorCode::MalformedRecord:
    case ErrorCode::DisjointnessViolation: return {400, "invalid_request", e.what(), nullptr};
  }
  return {500, "internal_error", e.what(), nullptr};
}

void send_error(httplib::Response& res, const ApiError& err) {
  Json body{{"error", {{"code", err.code}, {"message", err.message}}}};
  if (!err.detail.is_null()) body["error"]["detail"] = err.detail;
  res.status = err.status;
  res.set_content(body.dump(), "application/json");
}

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

Json parse_body(const httplib::Request& req) {
  Json j;
  try {
    j = Json::parse(req.body);
  } catch (const Json::parse_error& e) {
    throw ApiError{400, "parse_error", std::string("body is not valid JSON: ") + e.what(), nullptr};
  }
  if (!j.is_object()) throw ApiError{400, "parse_error", "body must be an object", nullptr};
  return j;
}

std::string text_field(const Json& body) {
  auto it = body.find("text");
  if (it == body.end() || !it->is_string())
    throw ApiError{400, "parse_error", "field 'text' must be a string", nullptr};
  return it->get<std::string>();
}

std::optional<std::string> optional_id(const Json& body) {
  auto it = body.find("id");
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ApiError{400, "parse_error", "field 'id' must be a string", nullptr};
  return it->get<std::string>();
}

RuleKind rule_name(const Json& v, const std::string& field) {
  if (!v.is_string()) throw ApiError{400, "invalid_request", field + " must name a rule", nullptr};
  auto r = parse_rule_kind(v.get<std::string>());
  if (!r)
    throw ApiError{400, "invalid_request", "unknown rule '" + v.get<std::string>() + "'", nullptr};
  return *r;
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  CorpusStore corpus;
  mutable std::shared_mutex corpus_mutex;
  std::counting_semaphore<1024> backend_slots;
  httplib::Server server;
  std::thread thread;
  int bound_port = 0;

  Impl(ServiceConfig c, CorpusStore store)
      : config(std::move(c)),
        corpus(std::move(store)),
        backend_slots(static_cast<std::ptrdiff_t>(
            std::clamp<std::size_t>(config.backend.max_parallel, 1, 1024))) {
    routes();
  }

  CorpusStore snapshot() const {
    std::shared_lock lock(corpus_mutex);
    return corpus;
  }

  /// Applies `mutate` to a copy, persists it, then publishes it.
  template <class Fn>
  void mutate_corpus(Fn mutate) {
    std::unique_lock lock(corpus_mutex);
    CorpusStore next = corpus;
    mutate(next);
    if (config.corpus_dir) save_corpus(next, *config.corpus_dir);
    corpus = std::move(next);
  }

  template <class Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ApiError& e) {
        send_error(res, e);
      } catch (const StageError& e) {
        auto err = from_error(e);
        err.detail = Json{{"stage", e.stage()}, {"rule", to_string(e.rule())}};
        send_error(res, err);
      } catch (const Error& e) {
        send_error(res, from_error(e));
      }
    };
  }

  void routes() {
    server.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      if (!config.token) return httplib::Server::HandlerResponse::Unhandled;
      if (req.get_header_value("Authorization") == "Bearer " + *config.token)
        return httplib::Server::HandlerResponse::Unhandled;
      send_error(res, {401, "unauthorized", "missing or invalid bearer token", nullptr});
      return httplib::Server::HandlerResponse::Handled;
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      if (res.status == 404)
        send_error(res, {404, "not_found", "no endpoint " + req.method + " " + req.path, nullptr});
      else
        send_error(res, {res.status, "invalid_request", "request rejected", nullptr});
      return httplib::Server::HandlerResponse::Handled;
    });
    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string what = "unexpected failure";
          try {
            if (ep) std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            what = e.what();
          } catch (...) {
          }
          send_error(res, {500, "internal_error", what, nullptr});
        });

    server.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"status", "ok"}});
    });

    server.Post("/v1/validate", guarded([](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      Requirement r;
      r.text = text_field(body);
      r.id = optional_id(body).value_or("");
      send_json(res, validation_report(r));
    }));

    server.Post("/v1/translate", guarded([this](const httplib::Request& req, httplib::Response& res) {
      translate_endpoint(req, res);
    }));

    server.Post("/v1/extract", guarded([](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      Requirement r;
      r.text = text_field(body);
      r.id = optional_id(body).value_or("");
      const auto ex = extract_constraints_detailed(r);
      Json formulas = Json::array();
      for (const auto& c : ex.constraints) formulas.push_back(render_formula(c, FormulaStyle::Mathematical));
      send_json(res, {{"constraints", ex.constraints},
                      {"formulas", formulas},
                      {"diagnostics", ex.diagnostics}});
    }));

    server.Post("/v1/consistency", guarded([this](const httplib::Request& req, httplib::Response& res) {
      consistency_endpoint(req, res);
    }));

    server.Get("/v1/support-sets", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"support_sets", snapshot().support_sets()}});
    }));

    server.Post("/v1/support-sets", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      auto set = support_set_from_json(body);
      if (body.find("provenance") == body.end()) set.provenance = SupportProvenance::User;
      validate_support_set(set);
      mutate_corpus([&](CorpusStore& c) { c.add_support_set(set); });
      send_json(res, set, 201);
    }));

    server.Get("/v1/requirements", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"requirements", snapshot().requirements()}});
    }));

    server.Post("/v1/requirements", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto r = requirement_from_json(parse_body(req));
      if (!has_valid_text(r) || text::trim(r.id).empty())
        throw ApiError{400, "invalid_request", "requirement needs a non-blank id and text", nullptr};
      mutate_corpus([&](CorpusStore& c) { c.add_requirement(r); });
      send_json(res, r, 201);
    }));

    server.Get(R"(/v1/requirements/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::shared_lock lock(corpus_mutex);
                 send_json(res, corpus.get_requirement(req.matches[1].str()));
               }));
  }

  void translate_endpoint(const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    Requirement source;
    source.text = text_field(body);
    source.id = optional_id(body).value_or("");

    std::vector<RuleKind> rules;
    if (auto it = body.find("rules"); it != body.end() && !it->is_null()) {
      if (!it->is_array()) throw ApiError{400, "invalid_request", "'rules' must be an array", nullptr};
      for (const auto& r : *it) rules.push_back(rule_name(r, "rules[]"));
    } else {
      const auto applicable = classify(source.text);
      for (auto rule : kAllRules)
        if (applicable.count(rule)) rules.push_back(rule);
    }

    std::map<RuleKind, std::string> explicit_ids;
    if (auto it = body.find("support_set_ids"); it != body.end() && !it->is_null()) {
      if (!it->is_object())
        throw ApiError{400, "invalid_request", "'support_set_ids' must map rule to id", nullptr};
      for (const auto& [name, id] : it->items()) {
        if (!id.is_string())
          throw ApiError{400, "invalid_request", "support set ids must be strings", nullptr};
        explicit_ids[rule_name(Json(name), "support_set_ids")] = id.get<std::string>();
      }
    }

    auto backend_config = config.backend;
    if (auto it = body.find("backend"); it != body.end() && !it->is_null()) {
      if (it->is_string())
        backend_config = backend_config_from_json(Json{{"kind", *it}}, backend_config);
      else
        backend_config = backend_config_from_json(*it, backend_config);
    }

    const auto store = snapshot();
    SupportSetRegistry registry(store.support_sets());
    // Resolve ids up front so an unknown set fails before any backend call.
    for (const auto& [rule, id] : explicit_ids) registry.get(id);
    auto backend = make_backend(backend_config, store.recordings());

    std::vector<TranslationResult> stages;
    if (!rules.empty()) {
      backend_slots.acquire();
      try {
        stages = translate(source, rules, make_selector(registry, explicit_ids), *backend);
      } catch (...) {
        backend_slots.release();
        throw;
      }
      backend_slots.release();
    }

    Json out_stages = Json::array();
    for (std::size_t k = 0; k < stages.size(); ++k) {
      const auto& s = stages[k];
      const auto graded = grade_auto(s);
      out_stages.push_back({{"stage", k + 1},
                            {"rule", to_string(s.rule)},
                            {"query", s.query},
                            {"output", s.output},
                            {"support_set_id", s.support_set_id},
                            {"prompt_hash", s.prompt_hash},
                            {"backend", to_string(s.backend_kind)},
                            {"auto_grade", graded.grade.value()},
                            {"evidence", graded.evidence}});
    }
    send_json(res, {{"stages", out_stages},
                    {"output", stages.empty() ? source.text : stages.back().output}});
  }

  void consistency_endpoint(const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    std::vector<Requirement> reqs;
    const auto ids = body.find("requirement_ids");
    const auto texts = body.find("texts");
    if (ids != body.end() && !ids->is_null()) {
      if (!ids->is_array())
        throw ApiError{400, "invalid_request", "'requirement_ids' must be an array", nullptr};
      std::shared_lock lock(corpus_mutex);
      for (const auto& id : *ids) {
        if (!id.is_string())
          throw ApiError{400, "invalid_request", "requirement ids must be strings", nullptr};
        reqs.push_back(corpus.get_requirement(id.get<std::string>()));
      }
    } else if (texts != body.end() && !texts->is_null()) {
      if (!texts->is_array())
        throw ApiError{400, "invalid_request", "'texts' must be an array", nullptr};
      for (const auto& t : *texts) {
        if (!t.is_string()) throw ApiError{400, "invalid_request", "texts must be strings", nullptr};
        Requirement r;
        r.id = "text-" + std::to_string(reqs.size() + 1);
        r.text = t.get<std::string>();
        reqs.push_back(std::move(r));
      }
    } else {
      reqs = snapshot().requirements();
    }
    std::vector<Constraint> constraints;
    for (const auto& r : reqs)
      for (auto& c : extract_constraints(r)) constraints.push_back(std::move(c));
    send_json(res, {{"constraints", constraints}, {"findings", check_consistency(constraints)}});
  }

  bool bind() {
    if (config.port == 0) {
      bound_port = server.bind_to_any_port(config.host);
      return bound_port > 0;
    }
    if (!server.bind_to_port(config.host, config.port)) return false;
    bound_port = config.port;
    return true;
  }
};

Service::Service(ServiceConfig config, CorpusStore corpus)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(corpus))) {}

Service::~Service() { stop(); }

bool Service::start() {
  if (!impl_->bind()) return false;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return true;
}

bool Service::run() {
  if (!impl_->bind()) return false;
  return impl_->server.listen_after_bind();
}

void Service::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int Service::port() const noexcept { return impl_->bound_port; }

}  // namespace reqdsl
