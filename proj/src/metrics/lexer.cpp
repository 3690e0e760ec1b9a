#include "metrics/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace apg {
namespace metrics {

namespace {

const std::unordered_set<std::string>& java_keywords() {
    static const std::unordered_set<std::string> kw = {
        "abstract", "assert",     "boolean",  "break",   "byte",       "case",     "catch",
        "char",     "class",      "const",    "continue","default",    "do",       "double",
        "else",     "enum",       "extends",  "final",   "finally",    "float",    "for",
        "goto",     "if",         "implements","import", "instanceof", "int",      "interface",
        "long",     "native",     "new",      "package", "private",    "protected","public",
        "return",   "short",      "static",   "strictfp","super",      "switch",   "synchronized",
        "this",     "throw",      "throws",   "transient","try",       "var",      "void",
        "volatile", "while",      "true",     "false",   "null",
    };
    return kw;
}

const std::unordered_set<std::string>& python_keywords() {
    static const std::unordered_set<std::string> kw = {
        "False",  "None",   "True",    "and",    "as",     "assert", "async", "await",
        "break",  "class",  "continue","def",    "del",    "elif",   "else",  "except",
        "finally","for",    "from",    "global", "if",     "import", "in",    "is",
        "lambda", "nonlocal","not",    "or",     "pass",   "raise",  "return","try",
        "while",  "with",   "yield",   "match",  "case",
    };
    return kw;
}

// Longest multi-char operators first.
const std::array<const char*, 24> kJavaOperators3Plus = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "==", "!=", "<=", ">=", "&&",
    "||",   "++",  "--",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "**",
};
const std::array<const char*, 22> kPythonOperators3Plus = {
    "**=", "//=", "<<=", ">>=", "->", ":=", "==", "!=", "<=", ">=", "**",
    "//",  "<<",  ">>",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=",
};

bool is_ident_start(char c, Lang lang) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           (lang == Lang::Java && c == '$');
}

bool is_ident_char(char c, Lang lang) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           (lang == Lang::Java && c == '$');
}

class Lexer {
public:
    Lexer(const std::string& source, Lang language) : src_(source), lang_(language) {}

    std::vector<CodeToken> run() {
        std::vector<CodeToken> out;
        while (true) {
            std::string trivia = consume_trivia();
            if (pos_ >= src_.size()) {
                CodeToken eof;
                eof.kind = TokenKind::Eof;
                eof.leading_trivia = std::move(trivia);
                eof.offset = pos_;
                eof.line = line_;
                eof.column = column_;
                out.push_back(std::move(eof));
                return out;
            }
            CodeToken tok = next_token();
            tok.leading_trivia = std::move(trivia);
            out.push_back(std::move(tok));
        }
    }

private:
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance(size_t n = 1) {
        for (size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                column_ = 0;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }

    std::string consume_trivia() {
        const size_t start = pos_;
        while (pos_ < src_.size()) {
            const char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (lang_ == Lang::Python && c == '#') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (lang_ == Lang::Java && c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
            } else if (lang_ == Lang::Java && c == '/' && peek(1) == '*') {
                advance(2);
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                advance(2);
            } else if (lang_ == Lang::Python && c == '\\' && peek(1) == '\n') {
                advance(2);  // explicit line continuation
            } else {
                break;
            }
        }
        return src_.substr(start, pos_ - start);
    }

    CodeToken begin_token() const {
        CodeToken tok;
        tok.offset = pos_;
        tok.line = line_;
        tok.column = column_;
        return tok;
    }

    CodeToken next_token() {
        CodeToken tok = begin_token();
        const char c = peek();

        if (is_ident_start(c, lang_)) {
            const size_t start = pos_;
            while (pos_ < src_.size() && is_ident_char(peek(), lang_)) advance();
            tok.text = src_.substr(start, pos_ - start);
            // Python string prefixes: r"...", f'...', b"...", rb'...'
            if (lang_ == Lang::Python && tok.text.size() <= 2 &&
                (peek() == '"' || peek() == '\'')) {
                bool prefix = true;
                for (char p : tok.text) {
                    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(p)));
                    if (lower != 'r' && lower != 'b' && lower != 'f' && lower != 'u') {
                        prefix = false;
                        break;
                    }
                }
                if (prefix) {
                    const std::string body = lex_string_body();
                    tok.text += body;
                    tok.kind = TokenKind::String;
                    return tok;
                }
            }
            tok.kind = is_language_keyword(tok.text, lang_) ? TokenKind::Keyword
                                                            : TokenKind::Identifier;
            return tok;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            const size_t start = pos_;
            bool seen_exp = false;
            while (pos_ < src_.size()) {
                const char d = peek();
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '_') {
                    if ((d == 'e' || d == 'E') && pos_ + 1 < src_.size() &&
                        (peek(1) == '+' || peek(1) == '-') && !seen_exp) {
                        seen_exp = true;
                        advance(2);
                        continue;
                    }
                    advance();
                } else {
                    break;
                }
            }
            tok.text = src_.substr(start, pos_ - start);
            tok.kind = TokenKind::Number;
            return tok;
        }

        if (c == '"' || c == '\'') {
            tok.text = lex_string_body();
            tok.kind = TokenKind::String;
            return tok;
        }

        // Multi-char operators, longest first.
        const auto try_ops = [&](const auto& ops) -> bool {
            for (const char* op : ops) {
                const size_t len = std::char_traits<char>::length(op);
                if (src_.compare(pos_, len, op) == 0) {
                    tok.text = op;
                    advance(len);
                    return true;
                }
            }
            return false;
        };
        const bool matched = lang_ == Lang::Java ? try_ops(kJavaOperators3Plus)
                                                 : try_ops(kPythonOperators3Plus);
        if (!matched) {
            tok.text = std::string(1, c);
            advance();
        }
        tok.kind = TokenKind::Operator;
        return tok;
    }

    // Consumes a quoted string starting at the current quote character.
    // Handles escapes and python triple quotes. Unterminated strings run to
    // end of input (tolerated; parser flags the line as degraded if needed).
    std::string lex_string_body() {
        const size_t start = pos_;
        const char quote = peek();
        bool triple = false;
        if (lang_ == Lang::Python && peek(1) == quote && peek(2) == quote) {
            triple = true;
            advance(3);
        } else {
            advance(1);
        }
        while (pos_ < src_.size()) {
            const char d = peek();
            if (d == '\\') {
                advance(2);
                continue;
            }
            if (triple) {
                if (d == quote && peek(1) == quote && peek(2) == quote) {
                    advance(3);
                    break;
                }
                advance();
            } else {
                if (d == quote) {
                    advance();
                    break;
                }
                if (d == '\n') break;  // unterminated single-line string
                advance();
            }
        }
        return src_.substr(start, pos_ - start);
    }

    const std::string& src_;
    Lang lang_;
    size_t pos_ = 0;
    int line_ = 1;
    int column_ = 0;
};

}  // namespace

bool is_language_keyword(const std::string& word, Lang language) {
    return language == Lang::Java ? java_keywords().count(word) > 0
                                  : python_keywords().count(word) > 0;
}

std::vector<CodeToken> lex_code(const std::string& source, Lang language) {
    return Lexer(source, language).run();
}

std::vector<std::string> code_tokens(const std::string& source, Lang language) {
    std::vector<std::string> out;
    for (const CodeToken& tok : lex_code(source, language)) {
        if (tok.kind != TokenKind::Eof) out.push_back(tok.text);
    }
    return out;
}

std::vector<std::string> nl_tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    for (char raw : text) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if (std::isalnum(static_cast<unsigned char>(c))) {
            current += c;
        } else {
            if (!current.empty()) {
                out.push_back(current);
                current.clear();
            }
            if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(std::string(1, c));
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

}  // namespace metrics
}  // namespace apg
