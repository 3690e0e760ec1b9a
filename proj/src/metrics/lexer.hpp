#pragma once

#include <string>
#include <vector>

#include "core/task.hpp"

namespace apg {
namespace metrics {

enum class TokenKind {
    Identifier,
    Keyword,
    Number,
    String,
    Operator,  // operators and punctuation
    Eof,
};

struct CodeToken {
    TokenKind kind = TokenKind::Eof;
    std::string text;            // token characters, exact source slice
    std::string leading_trivia;  // whitespace/comments preceding the token
    size_t offset = 0;           // byte offset of `text` in the source
    int line = 1;                // 1-based line of the first token character
    int column = 0;              // 0-based column; python block structure
};

/// Tokenizes java or python source. The stream always ends with one Eof
/// token that carries any trailing trivia, so concatenating
/// leading_trivia+text over the stream reproduces the source exactly.
/// Unknown characters become single-char Operator tokens; lexing never
/// fails.
std::vector<CodeToken> lex_code(const std::string& source, Lang language);

/// Token texts for metric computation: every non-Eof token, in order.
std::vector<std::string> code_tokens(const std::string& source, Lang language);

bool is_language_keyword(const std::string& word, Lang language);

/// Natural-language tokenization for summarization metrics: lowercased,
/// letter/digit runs and punctuation split into separate tokens.
std::vector<std::string> nl_tokenize(const std::string& text);

}  // namespace metrics
}  // namespace apg
