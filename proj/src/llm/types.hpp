#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/task.hpp"

namespace apg {

/// Generation settings. Defaults: temperature 0.2, top-p 0.95; max_tokens
/// picked per task (256 translation, 512 summarization, 128 API
/// recommendation).
struct SamplingParams {
    double temperature = 0.2;
    double top_p = 0.95;
    int max_tokens = 512;
    std::optional<long> seed;

    static SamplingParams defaults_for(TaskType task) {
        SamplingParams p;
        switch (task) {
            case TaskType::CodeTranslation: p.max_tokens = 256; break;
            case TaskType::CodeSummarization: p.max_tokens = 512; break;
            case TaskType::ApiRecommendation: p.max_tokens = 128; break;
        }
        return p;
    }
};

enum class FinishReason { Stop, Length, Error };

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;  // finite, <= 0
};

struct Completion {
    std::string text;
    std::vector<TokenLogprob> token_logprobs;  // empty when the provider gave none
    FinishReason finish_reason = FinishReason::Stop;
};

/// How per-token logprobs are folded into one target score.
enum class LogprobAggregate { Mean, Sum };

struct ProviderConfig {
    std::string endpoint_url;
    std::string model_name;
    std::string api_key_env = "APG_API_KEY";  // env var NAME, never the key itself
    std::chrono::milliseconds request_timeout = std::chrono::seconds(60);
    int max_retries = 3;
    int max_in_flight = 4;
    std::string embedding_model;  // empty: use the local fallback embedder
};

}  // namespace apg
