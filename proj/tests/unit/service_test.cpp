#include <doctest.h>
#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <thread>

#include "reqdsl/json_io.hpp"
#include "reqdsl/service.hpp"
#include "support.hpp"

using namespace reqdsl;
using namespace std::chrono_literals;
using Json = nlohmann::json;

namespace {

struct Running {
  Service service;
  httplib::Client client;

  explicit Running(ServiceConfig cfg, CorpusStore corpus = testing::paper_corpus())
      : service((cfg.port = 0, std::move(cfg)), std::move(corpus)), client(start_and_url()) {
    client.set_read_timeout(10, 0);
  }
  ~Running() { service.stop(); }

  std::string start_and_url() {
    REQUIRE(service.start());
    return "http://127.0.0.1:" + std::to_string(service.port());
  }

  std::pair<int, Json> post(const std::string& path, const std::string& body,
                            const httplib::Headers& headers = {}) {
    auto res = client.Post(path, headers, body, "application/json");
    REQUIRE(res);
    return {res->status, Json::parse(res->body)};
  }
  std::pair<int, Json> post(const std::string& path, const Json& body) { return post(path, body.dump()); }
  std::pair<int, Json> get(const std::string& path, const httplib::Headers& headers = {}) {
    auto res = client.Get(path, headers);
    REQUIRE(res);
    return {res->status, Json::parse(res->body)};
  }
};

ServiceConfig mock_config() {
  ServiceConfig c;
  c.backend.kind = BackendKind::Mock;
  return c;
}

bool in_closed_set(const Json& body) {
  const auto code = body.at("error").at("code").get<std::string>();
  return std::find(std::begin(kApiErrorCodes), std::end(kApiErrorCodes), code) != std::end(kApiErrorCodes);
}

void check_error(const std::pair<int, Json>& r, int status, const std::string& code) {
  CHECK(r.first == status);
  REQUIRE(r.second.contains("error"));
  CHECK(r.second["error"]["code"] == code);
  CHECK(r.second["error"]["message"].is_string());
  CHECK(in_closed_set(r.second));
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("health and unknown routes") {
    Running s(mock_config());
    auto [status, body] = s.get("/v1/health");
    CHECK(status == 200);
    CHECK(body["status"] == "ok");
    check_error(s.get("/v1/nothing-here"), 404, "not_found");
  }

  TEST_CASE("validate") {
    Running s(mock_config());
    auto [status, body] = s.post("/v1/validate", Json{{"text", "The duration of a flashing cycle MUST be 1 second."}});
    CHECK(status == 200);
    CHECK(body["conformance"]["modal_verb"] == "conformant");
    CHECK(body["diagnostics"]["modal_verb"].is_array());

    auto empty = s.post("/v1/validate", Json{{"text", ""}});
    CHECK(empty.first == 200);
    CHECK(empty.second["conformance"]["modal_verb"] == "violation");

    check_error(s.post("/v1/validate", Json{{"txt", "x"}}), 400, "parse_error");
    check_error(s.post("/v1/validate", std::string("{oops")), 400, "parse_error");
    check_error(s.post("/v1/validate", Json{{"text", 5}}), 400, "parse_error");
  }

  TEST_CASE("translate with the mock backend") {
    Running s(mock_config());
    auto [status, body] = s.post("/v1/translate", Json{{"text", "Low beam illuminant shall be LED."}});
    CHECK(status == 200);
    REQUIRE(body["stages"].size() == 1);
    CHECK(body["stages"][0]["rule"] == "modal_verb");
    CHECK(body["stages"][0]["output"] == "Low beam illuminant MUST be LED.");
    CHECK(body["stages"][0]["auto_grade"] == 1);
    CHECK(body["stages"][0]["prompt_hash"].get<std::string>().size() == 64);
    CHECK(body["output"] == "Low beam illuminant MUST be LED.");

    auto conformant = s.post("/v1/translate", Json{{"text", "IF: x, THEN: y MUST hold."}});
    CHECK(conformant.first == 200);
    CHECK(conformant.second["stages"].empty());

    auto cascade = s.post("/v1/translate", Json{{"text", "When the brake is pushed, the cruise control is deactivated."},
                                                {"rules", {"if_then", "modal_verb"}}});
    REQUIRE(cascade.second["stages"].size() == 2);
    CHECK(cascade.second["stages"][1]["output"].get<std::string>().find("MUST be deactivated") != std::string::npos);

    auto chosen = s.post("/v1/translate", Json{{"text", "Low beam illuminant shall be LED."},
                                               {"support_set_ids", {{"modal_verb", "modal-1"}}}});
    CHECK(chosen.second["stages"][0]["support_set_id"] == "modal-1");

    check_error(s.post("/v1/translate", Json{{"text", "Low beam illuminant shall be LED."},
                                             {"support_set_ids", {{"modal_verb", "nope"}}}}),
                404, "unknown_set");
    check_error(s.post("/v1/translate", Json{{"text", "x"}, {"rules", {"telepathy"}}}), 400, "invalid_request");
  }

  TEST_CASE("translate with the replay backend") {
    Running s(mock_config());
    auto [status, body] = s.post(
        "/v1/translate",
        Json{{"text", "With activated darkness switch (only armored vehicles) the cornering light is not activated."},
             {"rules", {"if_then"}},
             {"support_set_ids", {{"if_then", "ifthen-6"}}},
             {"backend", "replay"}});
    CHECK(status == 200);
    CHECK(body["stages"][0]["backend"] == "replay");
    CHECK(body["stages"][0]["output"] ==
          "IF: with activated darkness switch (only armored vehicles), THEN: the cornering light is not activated.");

    auto miss = s.post("/v1/translate", Json{{"text", "Unrecorded sentence is here."},
                                             {"rules", {"modal_verb"}},
                                             {"backend", "replay"}});
    check_error(miss, 502, "backend_error");
    CHECK(miss.second["error"]["detail"]["stage"] == 1);
    CHECK(miss.second["error"]["detail"]["rule"] == "modal_verb");
  }

  TEST_CASE("backend transport failures and timeouts") {
    Running s(mock_config());
    auto down = s.post("/v1/translate", Json{{"text", "Low beam illuminant shall be LED."},
                                             {"backend", {{"kind", "http"}, {"endpoint_url", "http://127.0.0.1:1"}}}});
    check_error(down, 502, "backend_error");

    httplib::Server slow;
    slow.Post(".*", [](const httplib::Request&, httplib::Response& res) {
      std::this_thread::sleep_for(600ms);
      res.set_content(R"({"choices":[{"text":"late"}]})", "application/json");
    });
    const int port = slow.bind_to_any_port("127.0.0.1");
    std::thread t([&] { slow.listen_after_bind(); });
    slow.wait_until_ready();
    auto timeout = s.post("/v1/translate",
                          Json{{"text", "Low beam illuminant shall be LED."},
                               {"backend", {{"kind", "http"},
                                            {"endpoint_url", "http://127.0.0.1:" + std::to_string(port)},
                                            {"timeout_ms", 200}}}});
    slow.stop();
    t.join();
    check_error(timeout, 504, "backend_timeout");
  }

  TEST_CASE("extract and consistency") {
    Running s(mock_config());
    auto [status, body] = s.post("/v1/extract", Json{{"text", "The braking distance can not be longer than 300m."}});
    CHECK(status == 200);
    REQUIRE(body["constraints"].size() == 1);
    CHECK(body["formulas"][0] == "braking distance <= 300m");
    CHECK(body["constraints"][0]["op"] == "<=");
    CHECK(body["constraints"][0]["unit"] == "m");

    auto texts = s.post("/v1/consistency", Json{{"texts", {"The braking distance must be no more than 300m.",
                                                           "The braking distance shall be at least 400m."}}});
    CHECK(texts.first == 200);
    REQUIRE(texts.second["findings"].size() == 1);
    CHECK(texts.second["findings"][0]["kind"] == "contradiction");

    auto ids = s.post("/v1/consistency", Json{{"requirement_ids", {"exp-01", "exp-02"}}});
    CHECK(ids.first == 200);
    CHECK(ids.second["constraints"].size() == 2);
    check_error(s.post("/v1/consistency", Json{{"requirement_ids", {"nope"}}}), 404, "unknown_id");
    CHECK(s.post("/v1/consistency", Json::object()).first == 200);
  }

  TEST_CASE("support sets and requirements") {
    const auto dir = testing::scratch_dir("service-corpus");
    auto cfg = mock_config();
    cfg.corpus_dir = dir;
    Running s(cfg);

    auto [status, body] = s.get("/v1/support-sets");
    CHECK(status == 200);
    CHECK(body["support_sets"].size() == 11);

    const Json set = {{"id", "mine"}, {"rule", "modal_verb"}, {"pairs", {{{"input", "x is 1"}, {"dsl", "x MUST be 1"}}}}};
    auto created = s.post("/v1/support-sets", set);
    CHECK(created.first == 201);
    CHECK(created.second["provenance"] == "user");
    check_error(s.post("/v1/support-sets", set), 409, "duplicate_id");
    const Json bad = {{"id", "bad"}, {"rule", "modal_verb"}, {"pairs", {{{"input", "x is 1"}, {"dsl", "x is 1"}}}}};
    CHECK(s.post("/v1/support-sets", bad).first == 400);
    CHECK(s.get("/v1/support-sets").second["support_sets"].size() == 12);

    auto req = s.post("/v1/requirements", Json{{"id", "new-1"}, {"text", "The lamp shall be red."}});
    CHECK(req.first == 201);
    check_error(s.post("/v1/requirements", Json{{"id", "new-1"}, {"text", "again"}}), 409, "duplicate_id");
    check_error(s.post("/v1/requirements", Json{{"id", " "}, {"text", "x"}}), 400, "invalid_request");
    auto fetched = s.get("/v1/requirements/new-1");
    CHECK(fetched.first == 200);
    CHECK(fetched.second["text"] == "The lamp shall be red.");
    check_error(s.get("/v1/requirements/absent"), 404, "unknown_id");
    CHECK(s.get("/v1/requirements").second["requirements"].size() ==
          testing::paper_corpus().requirements().size() + 1);

    const auto persisted = load_corpus(dir);
    CHECK(persisted.find_requirement("new-1") != nullptr);
    CHECK(persisted.find_support_set("mine") != nullptr);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("bearer token") {
    auto cfg = mock_config();
    cfg.token = "s3cret";
    Running s(cfg);
    check_error(s.get("/v1/health"), 401, "unauthorized");
    check_error(s.get("/v1/health", {{"Authorization", "Bearer wrong"}}), 401, "unauthorized");
    CHECK(s.get("/v1/health", {{"Authorization", "Bearer s3cret"}}).first == 200);
  }

  TEST_CASE("concurrent requests") {
    Running s(mock_config());
    std::vector<std::thread> threads;
    std::atomic<int> ok{0};
    for (int i = 0; i < 8; ++i)
      threads.emplace_back([&, i] {
        httplib::Client c("127.0.0.1", s.service.port());
        const Json body = {{"text", "The lamp " + std::to_string(i) + " shall be red."}};
        auto res = c.Post("/v1/translate", body.dump(), "application/json");
        if (res && res->status == 200 &&
            Json::parse(res->body)["output"] == "The lamp " + std::to_string(i) + " MUST be red.")
          ++ok;
      });
    for (auto& t : threads) t.join();
    CHECK(ok == 8);
  }
}
