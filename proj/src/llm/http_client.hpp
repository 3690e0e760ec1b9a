#pragma once

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "llm/client.hpp"

namespace apg {

struct HttpResult {
    int status = 0;
    std::string body;
    std::string error;  // non-empty on connection-level failure

    bool ok() const { return error.empty(); }
};

/// Transport seam: one JSON POST. The retry policy sits above this, so it
/// can be unit-tested with a fake transport.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResult post_json(const std::string& path, const std::string& body,
                                 const std::vector<std::pair<std::string, std::string>>& headers,
                                 std::chrono::milliseconds timeout) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url);

/// Counting semaphore without a compile-time cap; bounds in-flight requests.
class RequestGate {
public:
    explicit RequestGate(int slots) : slots_(slots > 0 ? slots : 1) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [this] { return slots_ > 0; });
        --slots_;
    }
    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++slots_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int slots_;
};

/// OpenAI-compatible client: chat completions for generation, the legacy
/// completions endpoint with echo+logprobs for target scoring, /embeddings
/// when an embedding model is configured (local fallback otherwise).
/// Transient failures retry with exponential backoff and jitter up to
/// max_retries; HTTP 4xx (except 429) is permanent and never retried.
class OpenAiClient : public LlmClient {
public:
    OpenAiClient(ProviderConfig config, std::unique_ptr<HttpTransport> transport = nullptr);

    Completion complete(const std::string& prompt, const SamplingParams& params) override;
    double score_target_logprob(const std::string& prompt, const std::string& target,
                                LogprobAggregate aggregate) override;
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
    std::string name() const override { return "openai:" + config_.model_name; }

    /// Exposed for tests: backoff base. Production default 250ms.
    void set_retry_base_delay(std::chrono::milliseconds delay) { retry_base_delay_ = delay; }

private:
    std::string post_with_retries(const std::string& path, const std::string& body);

    ProviderConfig config_;
    std::unique_ptr<HttpTransport> transport_;
    RequestGate gate_;
    std::chrono::milliseconds retry_base_delay_{250};
    std::atomic<std::uint64_t> next_request_id_{1};
};

}  // namespace apg
