#pragma once

#include <memory>
#include <string>
#include <vector>

#include "llm/types.hpp"

namespace apg {

/// Provider-agnostic language-model client. Implementations are shareable
/// across threads; callers may issue concurrent requests up to the
/// provider's max_in_flight bound.
class LlmClient {
public:
    virtual ~LlmClient() = default;

    /// Chat completion for a rendered prompt. finish_reason is Length iff
    /// generation hit max_tokens.
    virtual Completion complete(const std::string& prompt, const SamplingParams& params) = 0;

    /// Aggregated per-token log-probability of `target` conditioned on
    /// `prompt`. Mean by default (length-bias free); Sum available for
    /// compatibility. Trailing whitespace of the target is normalized
    /// before tokenization. Throws Capability when the provider cannot
    /// return logprobs.
    virtual double score_target_logprob(const std::string& prompt, const std::string& target,
                                        LogprobAggregate aggregate = LogprobAggregate::Mean) = 0;

    /// One fixed-dimension vector per input text.
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;

    virtual std::string name() const = 0;

    virtual bool supports_logprobs() const { return true; }
};

using LlmClientPtr = std::shared_ptr<LlmClient>;

}  // namespace apg
