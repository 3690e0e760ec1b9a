#include "llm/mock_client.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/text.hpp"
#include "llm/embedding.hpp"

namespace apg {

using nlohmann::json;

namespace {

std::vector<TokenLogprob> parse_token_logprobs(const json& arr, const std::string& where) {
    std::vector<TokenLogprob> out;
    int index = 0;
    for (const json& item : arr) {
        TokenLogprob tl;
        if (item.is_array() && item.size() == 2) {
            tl.token = item[0].get<std::string>();
            tl.logprob = item[1].get<double>();
        } else if (item.is_number()) {
            tl.token = "t" + std::to_string(index);
            tl.logprob = item.get<double>();
        } else {
            throw Error(ErrorCode::Config,
                        where + ": token_logprobs entries must be numbers or [token, logprob]");
        }
        if (!std::isfinite(tl.logprob) || tl.logprob > 0.0) {
            throw Error(ErrorCode::Config, where + ": logprobs must be finite and <= 0");
        }
        out.push_back(std::move(tl));
        ++index;
    }
    return out;
}

MockResponse parse_response(const json& obj, const std::string& where) {
    MockResponse r;
    if (obj.contains("text")) r.text = obj.at("text").get<std::string>();
    if (obj.contains("token_logprobs")) {
        r.token_logprobs = parse_token_logprobs(obj.at("token_logprobs"), where);
    }
    if (obj.contains("finish_reason")) {
        const std::string f = obj.at("finish_reason").get<std::string>();
        if (f == "stop") r.finish_reason = FinishReason::Stop;
        else if (f == "length") r.finish_reason = FinishReason::Length;
        else if (f == "error") r.finish_reason = FinishReason::Error;
        else throw Error(ErrorCode::Config, where + ": unknown finish_reason " + f);
    }
    return r;
}

std::vector<double> parse_logprob_list(const json& arr, const std::string& where) {
    std::vector<double> out;
    for (const TokenLogprob& tl : parse_token_logprobs(arr, where)) out.push_back(tl.logprob);
    return out;
}

// Stable pseudo-logprob for unscripted requests in non-strict mode.
double derived_logprob(std::string_view token, std::string_view salt) {
    const std::uint64_t h = fnv1a64(std::string(token) + "\x1f" + std::string(salt));
    return -0.5 - static_cast<double>(h % 4000) / 1000.0;  // in [-4.5, -0.5]
}

}  // namespace

std::shared_ptr<MockClient> MockClient::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open mock script: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Config, path + ": invalid JSON: " + e.what());
    }

    auto mock = std::make_shared<MockClient>(doc.value("strict", false));
    if (doc.contains("by_hash")) {
        for (const auto& [key, value] : doc.at("by_hash").items()) {
            mock->completions_[key] = parse_response(value, path);
        }
    }
    if (doc.contains("by_prompt")) {
        for (const auto& [prompt, value] : doc.at("by_prompt").items()) {
            mock->completions_[fnv1a64_hex(prompt)] = parse_response(value, path);
        }
    }
    if (doc.contains("rules")) {
        for (const json& rule : doc.at("rules")) {
            mock->completion_rules_.push_back(
                {rule.at("contains").get<std::string>(), parse_response(rule, path)});
        }
    }
    if (doc.contains("scores")) {
        for (const auto& [key, value] : doc.at("scores").items()) {
            mock->scores_[key] = parse_logprob_list(value, path);
        }
    }
    if (doc.contains("score_rules")) {
        for (const json& rule : doc.at("score_rules")) {
            mock->score_rules_.push_back({rule.value("prompt_contains", ""),
                                          rule.value("target_contains", ""),
                                          parse_logprob_list(rule.at("token_logprobs"), path)});
        }
    }
    if (doc.contains("default")) {
        mock->default_response_ = parse_response(doc.at("default"), path);
    }
    return mock;
}

void MockClient::script_completion(const std::string& prompt, MockResponse response) {
    completions_[fnv1a64_hex(prompt)] = std::move(response);
}

void MockClient::script_completion_rule(const std::string& contains, MockResponse response) {
    completion_rules_.push_back({contains, std::move(response)});
}

void MockClient::script_score(const std::string& prompt, const std::string& target,
                              std::vector<double> logprobs) {
    scores_[fnv1a64_hex(score_key(prompt, target))] = std::move(logprobs);
}

void MockClient::script_score_rule(const std::string& prompt_contains,
                                   const std::string& target_contains,
                                   std::vector<double> logprobs) {
    score_rules_.push_back({prompt_contains, target_contains, std::move(logprobs)});
}

void MockClient::set_default_response(MockResponse response) {
    default_response_ = std::move(response);
}

std::string MockClient::score_key(const std::string& prompt, const std::string& target) {
    return prompt + "\x1f" + rstrip(target);
}

std::optional<MockResponse> MockClient::resolve_completion(const std::string& prompt) const {
    auto it = completions_.find(fnv1a64_hex(prompt));
    if (it != completions_.end()) return it->second;
    for (const CompletionRule& rule : completion_rules_) {
        if (prompt.find(rule.contains) != std::string::npos) return rule.response;
    }
    return default_response_;
}

std::optional<std::vector<double>> MockClient::resolve_score(const std::string& prompt,
                                                             const std::string& target) const {
    auto it = scores_.find(fnv1a64_hex(score_key(prompt, target)));
    if (it != scores_.end()) return it->second;
    for (const ScoreRule& rule : score_rules_) {
        const bool prompt_ok =
            rule.prompt_contains.empty() || prompt.find(rule.prompt_contains) != std::string::npos;
        const bool target_ok =
            rule.target_contains.empty() || target.find(rule.target_contains) != std::string::npos;
        if (prompt_ok && target_ok) return rule.logprobs;
    }
    return std::nullopt;
}

Completion MockClient::complete(const std::string& prompt, const SamplingParams& params) {
    if (prompt.empty()) throw Error(ErrorCode::InvalidArgument, "empty prompt");
    {
        std::lock_guard<std::mutex> lock(log_mutex_);
        prompt_log_.push_back(prompt);
    }

    std::optional<MockResponse> scripted = resolve_completion(prompt);
    if (!scripted) {
        if (strict_) {
            throw Error(ErrorCode::Provider,
                        "mock (strict): no scripted response for prompt hash " +
                            fnv1a64_hex(prompt));
        }
        MockResponse derived;
        derived.text = "mock-output-" + fnv1a64_hex(prompt).substr(0, 8);
        scripted = std::move(derived);
    }

    Completion out;
    out.token_logprobs = scripted->token_logprobs;

    // Mock tokens are the scripted logprob tokens when present, whitespace
    // tokens otherwise; max_tokens truncates that stream.
    std::vector<std::string> tokens;
    if (!scripted->token_logprobs.empty()) {
        for (const TokenLogprob& tl : scripted->token_logprobs) tokens.push_back(tl.token);
    } else {
        tokens = split_whitespace(scripted->text);
    }

    if (params.max_tokens > 0 && static_cast<int>(tokens.size()) > params.max_tokens) {
        std::string truncated;
        for (int i = 0; i < params.max_tokens; ++i) {
            if (i > 0) truncated += ' ';
            truncated += tokens[static_cast<size_t>(i)];
        }
        out.text = truncated;
        out.token_logprobs.resize(static_cast<size_t>(params.max_tokens) <=
                                          out.token_logprobs.size()
                                      ? static_cast<size_t>(params.max_tokens)
                                      : out.token_logprobs.size());
        out.finish_reason = FinishReason::Length;
    } else {
        out.text = scripted->text;
        out.finish_reason = scripted->finish_reason.value_or(FinishReason::Stop);
    }
    return out;
}

double MockClient::score_target_logprob(const std::string& prompt, const std::string& target,
                                        LogprobAggregate aggregate) {
    if (target.empty()) throw Error(ErrorCode::InvalidArgument, "empty scoring target");
    const std::string normalized = rstrip(target);

    std::vector<double> logprobs;
    if (auto scripted = resolve_score(prompt, normalized)) {
        logprobs = std::move(*scripted);
    } else if (strict_) {
        throw Error(ErrorCode::Provider, "mock (strict): no scripted score for request hash " +
                                             fnv1a64_hex(score_key(prompt, normalized)));
    } else {
        const std::string salt = fnv1a64_hex(prompt);
        for (const std::string& token : split_whitespace(normalized)) {
            logprobs.push_back(derived_logprob(token, salt));
        }
        if (logprobs.empty()) logprobs.push_back(derived_logprob(normalized, salt));
    }

    double sum = 0.0;
    for (double lp : logprobs) sum += lp;
    if (aggregate == LogprobAggregate::Sum) return sum;
    return logprobs.empty() ? 0.0 : sum / static_cast<double>(logprobs.size());
}

std::vector<std::vector<double>> MockClient::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) throw Error(ErrorCode::InvalidArgument, "embed: empty text list");
    return fallback_embed(texts);
}

std::vector<std::string> MockClient::prompts_seen() const {
    std::lock_guard<std::mutex> lock(log_mutex_);
    return prompt_log_;
}

}  // namespace apg
