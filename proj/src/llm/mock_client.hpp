#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "llm/client.hpp"

namespace apg {

struct MockResponse {
    std::string text;
    std::vector<TokenLogprob> token_logprobs;
    std::optional<FinishReason> finish_reason;  // derived from max_tokens when unset
};

/// Deterministic scripted backend. Completions and target scores resolve in
/// this order: exact entry (keyed by prompt hash), first matching
/// substring rule, default response. In strict mode an unresolved request
/// is a permanent error; otherwise the mock derives a stable response from
/// the request hash, so whole pipelines run offline without scripting
/// every prompt.
///
/// Script files are JSON:
///   {
///     "strict": false,
///     "by_hash":   {"<fnv1a64 hex of prompt>": {"text": ..., "token_logprobs": [...]}},
///     "by_prompt": {"<literal prompt>": {...}},
///     "rules":     [{"contains": "...", "text": ..., "token_logprobs": [...]}],
///     "scores":    {"<fnv1a64 hex of score key>": [-0.5, -1.5]},
///     "score_rules": [{"prompt_contains": "...", "target_contains": "...",
///                      "token_logprobs": [...]}],
///     "default":   {"text": "..."}
///   }
/// token_logprobs entries are [token, logprob] pairs or bare numbers.
class MockClient : public LlmClient {
public:
    explicit MockClient(bool strict = true) : strict_(strict) {}

    static std::shared_ptr<MockClient> from_file(const std::string& path);

    void script_completion(const std::string& prompt, MockResponse response);
    void script_completion_rule(const std::string& contains, MockResponse response);
    void script_score(const std::string& prompt, const std::string& target,
                      std::vector<double> logprobs);
    void script_score_rule(const std::string& prompt_contains, const std::string& target_contains,
                           std::vector<double> logprobs);
    void set_default_response(MockResponse response);
    void set_strict(bool strict) { strict_ = strict; }

    Completion complete(const std::string& prompt, const SamplingParams& params) override;
    double score_target_logprob(const std::string& prompt, const std::string& target,
                                LogprobAggregate aggregate) override;
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;
    std::string name() const override { return "mock"; }

    /// Prompts passed to complete(), in call order.
    std::vector<std::string> prompts_seen() const;

    /// Lookup key for a scored (prompt, target) request. The target's
    /// trailing whitespace is normalized first, making scores invariant to
    /// it.
    static std::string score_key(const std::string& prompt, const std::string& target);

private:
    struct CompletionRule {
        std::string contains;
        MockResponse response;
    };
    struct ScoreRule {
        std::string prompt_contains;
        std::string target_contains;
        std::vector<double> logprobs;
    };

    std::optional<MockResponse> resolve_completion(const std::string& prompt) const;
    std::optional<std::vector<double>> resolve_score(const std::string& prompt,
                                                     const std::string& target) const;

    bool strict_ = true;
    std::map<std::string, MockResponse> completions_;  // key: fnv1a64_hex(prompt)
    std::vector<CompletionRule> completion_rules_;
    std::map<std::string, std::vector<double>> scores_;  // key: fnv1a64_hex(score_key)
    std::vector<ScoreRule> score_rules_;
    std::optional<MockResponse> default_response_;

    mutable std::mutex log_mutex_;
    std::vector<std::string> prompt_log_;
};

}  // namespace apg
