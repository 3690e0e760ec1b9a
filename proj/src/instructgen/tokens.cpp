#include "instructgen/tokens.hpp"

#include <map>

#include "core/error.hpp"
#include "core/text.hpp"
#include "metrics/lexer.hpp"

namespace apg {

namespace {

const std::map<std::string, TokenizerFn>& registry() {
    static const std::map<std::string, TokenizerFn> tokenizers = {
        {"whitespace", [](const std::string& s) { return split_whitespace(s); }},
        {"code:java",
         [](const std::string& s) { return metrics::code_tokens(s, Lang::Java); }},
        {"code:python",
         [](const std::string& s) { return metrics::code_tokens(s, Lang::Python); }},
    };
    return tokenizers;
}

}  // namespace

const TokenizerFn& get_tokenizer(const std::string& name) {
    auto it = registry().find(name);
    if (it == registry().end()) {
        throw Error(ErrorCode::Config, "unknown tokenizer: \"" + name + "\"");
    }
    return it->second;
}

std::vector<std::string> tokenizer_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

double count_instruction_tokens(const std::vector<std::string>& instructions,
                                const std::string& tokenizer) {
    if (instructions.empty()) {
        throw Error(ErrorCode::InvalidArgument, "count_instruction_tokens: no instructions");
    }
    const TokenizerFn& tokenize = get_tokenizer(tokenizer);
    double total = 0.0;
    for (const std::string& instruction : instructions) {
        total += static_cast<double>(tokenize(instruction).size());
    }
    return total / static_cast<double>(instructions.size());
}

}  // namespace apg
