#pragma once

#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "clutternav/errors.hpp"

namespace clutternav {

struct LlmRequest {
    std::string system;
    std::string user;
    int max_tokens = 64;
};

struct LlmResponse {
    std::string text;
};

/// Network failure, timeout or a non-success status.
class TransportError : public Error {
public:
    using Error::Error;
};

/// Completion backend. Implementations may be nondeterministic.
class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual LlmResponse complete(const LlmRequest& request) = 0;
    virtual bool deterministic() const { return false; }
};

/// Test double: replies from a queue of scripted lines or from a callback.
/// Every request is recorded.
class ScriptedLlmClient : public LlmClient {
public:
    using Handler = std::function<LlmResponse(const LlmRequest&)>;

    ScriptedLlmClient() = default;
    explicit ScriptedLlmClient(std::vector<std::string> replies);
    explicit ScriptedLlmClient(Handler handler);

    void push_reply(std::string text);
    /// The next call throws TransportError.
    void push_failure(std::string message = "scripted transport failure");
    /// Reply used when the queue is empty; without one an empty queue throws.
    void set_default_reply(std::string text);

    LlmResponse complete(const LlmRequest& request) override;
    bool deterministic() const override { return true; }

    std::vector<LlmRequest> requests() const;
    std::size_t calls() const;

private:
    struct Entry {
        bool failure = false;
        std::string text;
    };
    mutable std::mutex mutex_;
    std::deque<Entry> queue_;
    std::optional<std::string> default_reply_;
    Handler handler_;
    std::vector<LlmRequest> requests_;
};

struct HttpLlmConfig {
    std::string endpoint;  // e.g. https://host/v1/chat/completions
    std::string api_key;
    std::string model = "default";
    int timeout_s = 30;

    /// Reads CLUTTERNAV_LLM_ENDPOINT, CLUTTERNAV_LLM_API_KEY and
    /// CLUTTERNAV_LLM_MODEL over the given defaults.
    static HttpLlmConfig from_env(HttpLlmConfig defaults);
    static HttpLlmConfig from_env();
};

/// Chat-completions style JSON over HTTP(S).
class HttpLlmClient : public LlmClient {
public:
    explicit HttpLlmClient(HttpLlmConfig config);
    LlmResponse complete(const LlmRequest& request) override;

private:
    HttpLlmConfig config_;
    std::string base_;
    std::string path_;
};

}  // namespace clutternav
