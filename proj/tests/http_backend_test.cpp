#include "guandan/http_backend.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "guandan/agents.hpp"
#include "guandan/fixtures.hpp"
#include "golden_util.hpp"

using namespace guandan;
using namespace guandan::testutil;

namespace {

/// In-process chat-completion server for exercising the HTTP client.
class LocalServer {
public:
    explicit LocalServer(std::string reply) : reply_(std::move(reply)) {
        server_.Post("/v1/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         requests_++;
                         last_body_ = req.body;
                         if (auto it = req.headers.find("Authorization");
                             it != req.headers.end()) {
                             last_auth_ = it->second;
                         }
                         if (fail_remaining_ > 0) {
                             fail_remaining_--;
                             res.status = 500;
                             return;
                         }
                         nlohmann::json j;
                         j["choices"] = {{{"message", {{"content", reply_}}}}};
                         res.set_content(j.dump(), "application/json");
                     });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~LocalServer() {
        server_.stop();
        thread_.join();
    }

    HttpBackendConfig config() const {
        HttpBackendConfig cfg;
        cfg.base_url = "http://127.0.0.1:" + std::to_string(port_);
        cfg.api_key_env = "GUANDAN_TEST_KEY";
        return cfg;
    }

    void fail_next(int n) { fail_remaining_ = n; }
    int requests() const { return requests_; }
    std::string last_body() const { return last_body_; }
    std::string last_auth() const { return last_auth_; }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::string reply_;
    std::atomic<int> fail_remaining_{0};
    std::atomic<int> requests_{0};
    std::string last_body_;
    std::string last_auth_;
};

}  // namespace

TEST(HttpBackend, round_trip_request_shape_and_auth) {
    LocalServer server("Plan 1 is selected.");
    setenv("GUANDAN_TEST_KEY", "sk-test-123", 1);
    HttpBackend backend(server.config());

    PromptBundle bundle;
    bundle.messages.push_back({Role::System, "rules here"});
    bundle.messages.push_back({Role::User, "what to play?"});
    LlmParams params;
    params.model = "test-model";
    params.temperature = 0.0;
    params.max_output = 64;

    std::string reply = backend.complete(bundle, params);
    EXPECT_EQ(reply, "Plan 1 is selected.");

    auto body = nlohmann::json::parse(server.last_body());
    EXPECT_EQ(body.at("model"), "test-model");
    EXPECT_EQ(body.at("temperature"), 0.0);
    EXPECT_EQ(body.at("max_tokens"), 64);
    ASSERT_EQ(body.at("messages").size(), 2u);
    EXPECT_EQ(body.at("messages")[0].at("role"), "system");
    EXPECT_EQ(body.at("messages")[1].at("role"), "user");
    EXPECT_EQ(server.last_auth(), "Bearer sk-test-123");
}

TEST(HttpBackend, retries_then_succeeds) {
    LocalServer server("ok");
    server.fail_next(2);
    HttpBackend backend(server.config());
    PromptBundle bundle;
    bundle.messages.push_back({Role::User, "hi"});
    LlmParams params;
    params.retries = 3;
    EXPECT_EQ(backend.complete(bundle, params), "ok");
    EXPECT_EQ(server.requests(), 3);
}

TEST(HttpBackend, exhausted_retries_raise) {
    LocalServer server("ok");
    server.fail_next(100);
    HttpBackend backend(server.config());
    PromptBundle bundle;
    bundle.messages.push_back({Role::User, "hi"});
    LlmParams params;
    params.retries = 2;
    EXPECT_THROW(backend.complete(bundle, params), BackendError);
    EXPECT_EQ(server.requests(), 3);  // initial attempt plus two retries
}

TEST(HttpBackend, drives_a_tom_agent_end_to_end) {
    LocalServer server("方案1");
    TomAgentConfig cfg;
    cfg.mode = TomMode::Vanilla;
    TomAgent agent(cfg, std::make_shared<HttpBackend>(server.config()), &shared_templates());

    DealState st = fixtures::reference_deal();
    Observation obs = observe(st);
    Action a = agent.act(obs);
    EXPECT_TRUE(a.is_pass());  // plan 1 on the fixture is the pass
    EXPECT_EQ(server.requests(), 1);
}
