#include "clutternav/llm_client.hpp"

#include <cstdlib>

#include "httplib.h"
#include "json_io.hpp"

namespace clutternav {

ScriptedLlmClient::ScriptedLlmClient(std::vector<std::string> replies) {
    for (auto& r : replies) queue_.push_back({false, std::move(r)});
}

ScriptedLlmClient::ScriptedLlmClient(Handler handler) : handler_(std::move(handler)) {}

void ScriptedLlmClient::push_reply(std::string text) {
    std::lock_guard lock(mutex_);
    queue_.push_back({false, std::move(text)});
}

void ScriptedLlmClient::push_failure(std::string message) {
    std::lock_guard lock(mutex_);
    queue_.push_back({true, std::move(message)});
}

void ScriptedLlmClient::set_default_reply(std::string text) {
    std::lock_guard lock(mutex_);
    default_reply_ = std::move(text);
}

LlmResponse ScriptedLlmClient::complete(const LlmRequest& request) {
    Handler handler;
    {
        std::lock_guard lock(mutex_);
        requests_.push_back(request);
        if (!queue_.empty()) {
            Entry e = std::move(queue_.front());
            queue_.pop_front();
            if (e.failure) throw TransportError(e.text);
            return {e.text};
        }
        if (default_reply_) return {*default_reply_};
        handler = handler_;
    }
    if (handler) return handler(request);
    throw TransportError("scripted client has no reply left");
}

std::vector<LlmRequest> ScriptedLlmClient::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

std::size_t ScriptedLlmClient::calls() const {
    std::lock_guard lock(mutex_);
    return requests_.size();
}

HttpLlmConfig HttpLlmConfig::from_env(HttpLlmConfig defaults) {
    if (const char* v = std::getenv("CLUTTERNAV_LLM_ENDPOINT")) defaults.endpoint = v;
    if (const char* v = std::getenv("CLUTTERNAV_LLM_API_KEY")) defaults.api_key = v;
    if (const char* v = std::getenv("CLUTTERNAV_LLM_MODEL")) defaults.model = v;
    return defaults;
}

HttpLlmConfig HttpLlmConfig::from_env() { return from_env(HttpLlmConfig{}); }

HttpLlmClient::HttpLlmClient(HttpLlmConfig config) : config_(std::move(config)) {
    const auto scheme = config_.endpoint.find("://");
    if (scheme == std::string::npos) throw ConfigError("LLM endpoint must include a scheme: " + config_.endpoint);
    const auto slash = config_.endpoint.find('/', scheme + 3);
    base_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

LlmResponse HttpLlmClient::complete(const LlmRequest& request) {
    detail::Json body;
    body["model"] = config_.model;
    body["max_tokens"] = request.max_tokens;
    body["temperature"] = 0;
    body["messages"] = detail::Json::array({{{"role", "system"}, {"content", request.system}},
                                            {{"role", "user"}, {"content", request.user}}});
    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    client.set_write_timeout(config_.timeout_s, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw TransportError("LLM request failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw TransportError("LLM endpoint returned HTTP " + std::to_string(res->status));
    try {
        const auto j = detail::Json::parse(res->body);
        return {j.at("choices").at(0).at("message").at("content").get<std::string>()};
    } catch (const std::exception& e) {
        throw TransportError(std::string("unexpected LLM response body: ") + e.what());
    }
}

}  // namespace clutternav
