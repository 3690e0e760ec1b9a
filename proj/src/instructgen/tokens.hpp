#pragma once

#include <functional>
#include <string>
#include <vector>

namespace apg {

using TokenizerFn = std::function<std::vector<std::string>(const std::string&)>;

/// Registered tokenizers: "whitespace" (baseline), "code:java",
/// "code:python". Unknown names are configuration errors.
const TokenizerFn& get_tokenizer(const std::string& name);

std::vector<std::string> tokenizer_names();

/// Arithmetic mean token count over the instructions.
double count_instruction_tokens(const std::vector<std::string>& instructions,
                                const std::string& tokenizer = "whitespace");

}  // namespace apg
