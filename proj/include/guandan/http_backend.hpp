#pragma once

#include <cstdlib>
#include <string>

#include "guandan/tom.hpp"
#include "httplib.h"
#include "json.hpp"

namespace guandan {

struct HttpBackendConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key_env = "GUANDAN_API_KEY";
};

/// Chat-completion HTTP client. Sends {model, messages, temperature,
/// max_tokens} to base_url + path with the bearer key from the configured
/// environment variable, retries up to params.retries, then raises
/// BackendError.
class HttpBackend : public LlmBackend {
public:
    explicit HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {}

    std::string complete(const PromptBundle& bundle, const LlmParams& params) override {
        nlohmann::ordered_json body;
        body["model"] = params.model;
        body["messages"] = nlohmann::ordered_json::array();
        for (const Message& m : bundle.messages) {
            body["messages"].push_back({{"role", m.role == Role::System ? "system" : "user"},
                                        {"content", m.content}});
        }
        body["temperature"] = params.temperature;
        body["max_tokens"] = params.max_output;

        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(params.timeout_ms / 1000, (params.timeout_ms % 1000) * 1000);
        client.set_read_timeout(params.timeout_ms / 1000, (params.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key && *key) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        std::string last_error = "no attempt made";
        const std::string payload = body.dump();
        for (int attempt = 0; attempt <= params.retries; ++attempt) {
            auto res = client.Post(cfg_.path, headers, payload, "application/json");
            if (!res) {
                last_error = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "http status " + std::to_string(res->status);
                continue;
            }
            try {
                auto j = nlohmann::json::parse(res->body);
                return j.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("bad response body: ") + e.what();
            }
        }
        throw BackendError("chat completion failed after retries: " + last_error);
    }

private:
    HttpBackendConfig cfg_;
};

}  // namespace guandan
