#include "llm/http_client.hpp"

#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "core/error.hpp"
#include "core/text.hpp"
#include "llm/embedding.hpp"

namespace apg {

using nlohmann::json;

namespace {

class HttplibTransport : public HttpTransport {
public:
    explicit HttplibTransport(std::string base_url) : base_url_(std::move(base_url)) {}

    HttpResult post_json(const std::string& path, const std::string& body,
                         const std::vector<std::pair<std::string, std::string>>& headers,
                         std::chrono::milliseconds timeout) override {
        httplib::Client client(base_url_);
        client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
        client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
        httplib::Headers hdrs;
        for (const auto& [k, v] : headers) hdrs.emplace(k, v);

        auto res = client.Post(path, hdrs, body, "application/json");
        HttpResult out;
        if (!res) {
            out.error = "connection failure: " + httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        return out;
    }

private:
    std::string base_url_;
};

std::chrono::milliseconds backoff_with_jitter(int attempt, std::chrono::milliseconds base) {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    const auto exp = base.count() * (1ll << std::min(attempt, 6));
    const auto jitter = static_cast<long long>(rng() % static_cast<std::uint64_t>(base.count() + 1));
    return std::chrono::milliseconds(std::min<long long>(exp + jitter, 30'000));
}

std::string provider_error_message(const std::string& body) {
    try {
        json doc = json::parse(body);
        if (doc.contains("error")) {
            const json& err = doc.at("error");
            if (err.is_object() && err.contains("message")) {
                return err.at("message").get<std::string>();
            }
            if (err.is_string()) return err.get<std::string>();
        }
    } catch (const json::exception&) {
        // fall through; raw body below
    }
    return body.size() > 400 ? body.substr(0, 400) + "..." : body;
}

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport(const std::string& base_url) {
    return std::make_unique<HttplibTransport>(base_url);
}

OpenAiClient::OpenAiClient(ProviderConfig config, std::unique_ptr<HttpTransport> transport)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport) : make_httplib_transport(config_.endpoint_url)),
      gate_(config_.max_in_flight) {
    if (config_.max_in_flight < 1) {
        throw Error(ErrorCode::Config, "max_in_flight must be >= 1");
    }
}

std::string OpenAiClient::post_with_retries(const std::string& path, const std::string& body) {
    std::vector<std::pair<std::string, std::string>> headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
            headers.emplace_back("Authorization", std::string("Bearer ") + key);
        }
    }
    const std::uint64_t request_id = next_request_id_.fetch_add(1);
    headers.emplace_back("X-Request-Id", std::to_string(request_id));

    gate_.acquire();
    struct GateRelease {
        RequestGate& gate;
        ~GateRelease() { gate.release(); }
    } release{gate_};

    std::string last_failure;
    const int attempts = config_.max_retries + 1;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff_with_jitter(attempt - 1, retry_base_delay_));
        }
        HttpResult result = transport_->post_json(path, body, headers, config_.request_timeout);
        if (!result.ok()) {
            last_failure = result.error;
            continue;  // transient: connection-level failure
        }
        if (result.status == 429 || result.status >= 500) {
            last_failure = "HTTP " + std::to_string(result.status) + ": " +
                           provider_error_message(result.body);
            continue;  // transient: throttled or server-side
        }
        if (result.status >= 400) {
            throw Error(ErrorCode::Provider,
                        "request " + std::to_string(request_id) + " rejected (HTTP " +
                            std::to_string(result.status) +
                            "): " + provider_error_message(result.body));
        }
        return result.body;
    }
    throw TransportError("request " + std::to_string(request_id) + " failed after " +
                             std::to_string(attempts) + " attempts: " + last_failure,
                         attempts);
}

Completion OpenAiClient::complete(const std::string& prompt, const SamplingParams& params) {
    if (prompt.empty()) throw Error(ErrorCode::InvalidArgument, "empty prompt");

    json request = {
        {"model", config_.model_name},
        {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
        {"temperature", params.temperature},
        {"top_p", params.top_p},
        {"max_tokens", params.max_tokens},
    };
    if (params.seed) request["seed"] = *params.seed;

    const std::string body = post_with_retries("/chat/completions", request.dump());

    Completion out;
    try {
        json doc = json::parse(body);
        const json& choice = doc.at("choices").at(0);
        if (choice.contains("message") && choice.at("message").contains("content") &&
            !choice.at("message").at("content").is_null()) {
            out.text = choice.at("message").at("content").get<std::string>();
        }
        const std::string finish = choice.value("finish_reason", "stop");
        out.finish_reason = finish == "length" ? FinishReason::Length
                            : finish == "stop" ? FinishReason::Stop
                                               : FinishReason::Error;
        if (choice.contains("logprobs") && choice.at("logprobs").is_object() &&
            choice.at("logprobs").contains("content")) {
            for (const json& entry : choice.at("logprobs").at("content")) {
                out.token_logprobs.push_back({entry.value("token", std::string()),
                                              entry.value("logprob", 0.0)});
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Provider, std::string("malformed completion response: ") + e.what());
    }
    return out;
}

double OpenAiClient::score_target_logprob(const std::string& prompt, const std::string& target,
                                          LogprobAggregate aggregate) {
    if (target.empty()) throw Error(ErrorCode::InvalidArgument, "empty scoring target");
    const std::string normalized = rstrip(target);

    // Echo-scoring via the legacy completions endpoint: the full text is the
    // prompt followed by the target; tokens whose offset lands inside the
    // target carry its conditional logprobs.
    json request = {
        {"model", config_.model_name}, {"prompt", prompt + normalized},
        {"max_tokens", 0},             {"echo", true},
        {"logprobs", 0},               {"temperature", 0.0},
    };
    const std::string body = post_with_retries("/completions", request.dump());

    try {
        json doc = json::parse(body);
        const json& choice = doc.at("choices").at(0);
        if (!choice.contains("logprobs") || choice.at("logprobs").is_null()) {
            throw Error(ErrorCode::Capability,
                        "provider returned no logprobs; use --mock or point at a "
                        "logprob-capable completions endpoint");
        }
        const json& lp = choice.at("logprobs");
        const json& offsets = lp.at("text_offset");
        const json& token_logprobs = lp.at("token_logprobs");

        double sum = 0.0;
        int count = 0;
        for (size_t i = 0; i < offsets.size() && i < token_logprobs.size(); ++i) {
            if (offsets[i].get<size_t>() < prompt.size()) continue;
            if (token_logprobs[i].is_null()) continue;
            sum += token_logprobs[i].get<double>();
            ++count;
        }
        if (count == 0) {
            throw Error(ErrorCode::Capability,
                        "no scored tokens fell inside the target; provider may not support echo");
        }
        return aggregate == LogprobAggregate::Sum ? sum : sum / count;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Provider, std::string("malformed logprob response: ") + e.what());
    }
}

std::vector<std::vector<double>> OpenAiClient::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed: empty text list");
    if (config_.embedding_model.empty()) return fallback_embed(texts);

    json request = {{"model", config_.embedding_model}, {"input", texts}};
    const std::string body = post_with_retries("/embeddings", request.dump());
    try {
        json doc = json::parse(body);
        std::vector<std::vector<double>> out(texts.size());
        for (const json& item : doc.at("data")) {
            const size_t index = item.at("index").get<size_t>();
            if (index >= out.size()) continue;
            out[index] = item.at("embedding").get<std::vector<double>>();
        }
        return out;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Provider, std::string("malformed embedding response: ") + e.what());
    }
}

}  // namespace apg
