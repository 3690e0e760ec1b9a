#include "metrics/parser.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace apg {
namespace metrics {

std::string SyntaxTree::shape_kind(const SyntaxNode& n) const {
    if (!is_leaf(n)) return n.kind;
    const CodeToken& tok = tokens[static_cast<size_t>(n.token)];
    switch (tok.kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Number: return "number";
        case TokenKind::String: return "string";
        case TokenKind::Keyword: return "kw:" + tok.text;
        case TokenKind::Operator: return "op:" + tok.text;
        case TokenKind::Eof: return "eof";
    }
    return "token";
}

std::string SyntaxTree::reconstruct_source() const {
    std::string out;
    std::function<void(int)> walk = [&](int index) {
        const SyntaxNode& n = node(index);
        if (is_leaf(n)) {
            const CodeToken& tok = tokens[static_cast<size_t>(n.token)];
            out += tok.leading_trivia;
            out += tok.text;
            return;
        }
        for (int child : n.children) walk(child);
    };
    if (root >= 0) walk(root);
    return out;
}

namespace {

constexpr int kMaxDepth = 200;

// Shared tree-building machinery for both language parsers. Leaves are
// created only by consume(), so every token enters the tree exactly once
// and in order.
class TreeBuilder {
public:
    TreeBuilder(const std::string& source, Lang lang) {
        tree_.language = lang;
        tree_.source = source;
        tree_.tokens = lex_code(source, lang);
    }

    SyntaxTree finish(int root) {
        tree_.root = root;
        return std::move(tree_);
    }

protected:
    const CodeToken& peek(size_t ahead = 0) const {
        const size_t idx = std::min(pos_ + ahead, tree_.tokens.size() - 1);
        return tree_.tokens[idx];
    }
    bool at_eof() const { return peek().kind == TokenKind::Eof; }
    bool at(const std::string& text) const { return peek().text == text && !at_eof(); }
    bool at_kw(const std::string& text) const {
        return peek().kind == TokenKind::Keyword && peek().text == text;
    }
    size_t pos() const { return pos_; }

    int consume() {
        SyntaxNode leaf;
        leaf.token = static_cast<int>(pos_);
        leaf.first_token = leaf.last_token = static_cast<int>(pos_);
        leaf.kind = "token";
        if (pos_ + 1 < tree_.tokens.size()) ++pos_;
        else eof_consumed_ = true;
        tree_.nodes.push_back(std::move(leaf));
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    int consume_error() {
        const int leaf = consume();
        tree_.nodes[static_cast<size_t>(leaf)].is_error = true;
        tree_.parse_degraded = true;
        return leaf;
    }

    /// Consumes `text` if present; otherwise records a degraded parse and
    /// returns -1 (missing token tolerated).
    int expect(const std::string& text) {
        if (at(text)) return consume();
        tree_.parse_degraded = true;
        return -1;
    }

    int make_node(const std::string& kind, std::vector<int> children, bool error = false) {
        SyntaxNode n;
        n.kind = kind;
        n.is_error = error;
        if (error) tree_.parse_degraded = true;
        n.children = std::move(children);
        n.children.erase(std::remove(n.children.begin(), n.children.end(), -1),
                         n.children.end());
        for (int child : n.children) {
            const SyntaxNode& c = tree_.nodes[static_cast<size_t>(child)];
            if (n.first_token < 0) n.first_token = c.first_token;
            n.last_token = c.last_token;
        }
        tree_.nodes.push_back(std::move(n));
        return static_cast<int>(tree_.nodes.size()) - 1;
    }

    bool eof_consumed() const { return eof_consumed_; }

    SyntaxTree tree_;
    size_t pos_ = 0;
    int depth_ = 0;
    bool eof_consumed_ = false;

    struct DepthGuard {
        TreeBuilder& b;
        explicit DepthGuard(TreeBuilder& builder) : b(builder) { ++b.depth_; }
        ~DepthGuard() { --b.depth_; }
        bool exceeded() const { return b.depth_ > kMaxDepth; }
    };
};

// ---------------------------------------------------------------------------
// Java
// ---------------------------------------------------------------------------

class JavaParser : public TreeBuilder {
public:
    JavaParser(const std::string& source) : TreeBuilder(source, Lang::Java) {}

    SyntaxTree parse() {
        std::vector<int> items;
        while (!at_eof()) {
            const size_t before = pos();
            items.push_back(parse_declaration_or_statement());
            if (pos() == before) items.push_back(consume_error());
        }
        items.push_back(consume());  // EOF leaf carries trailing trivia
        return finish(make_node("module", std::move(items)));
    }

private:
    static const std::unordered_set<std::string>& modifier_words() {
        static const std::unordered_set<std::string> words = {
            "public", "private", "protected", "static",   "final",    "abstract",
            "native", "volatile", "transient", "strictfp", "synchronized", "default",
        };
        return words;
    }
    static const std::unordered_set<std::string>& primitive_words() {
        static const std::unordered_set<std::string> words = {
            "boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var",
        };
        return words;
    }

    bool at_modifier() const {
        return peek().kind == TokenKind::Keyword && modifier_words().count(peek().text) > 0;
    }

    // Scans a type starting at `from` (token offsets relative to pos()).
    // Returns number of tokens consumed by the type, or 0 if none.
    size_t scan_type(size_t from) const {
        size_t i = from;
        const CodeToken& first = peek(i);
        if (first.kind == TokenKind::Keyword && primitive_words().count(first.text) > 0) {
            ++i;
        } else if (first.kind == TokenKind::Identifier) {
            ++i;
            while (peek(i).text == "." && peek(i + 1).kind == TokenKind::Identifier) i += 2;
            if (peek(i).text == "<") {  // generic arguments, balanced
                int angle = 0;
                size_t j = i;
                while (!(peek(j).kind == TokenKind::Eof)) {
                    const std::string& t = peek(j).text;
                    if (t == "<") ++angle;
                    else if (t == ">") { --angle; if (angle == 0) { ++j; break; } }
                    else if (t == ">>") { angle -= 2; if (angle <= 0) { ++j; break; } }
                    else if (t == ";" || t == "{" || t == ")" || t == "=") break;
                    ++j;
                    if (j - i > 64) break;  // give up on absurd generics
                }
                if (angle <= 0 && j > i) i = j; else return 0;
            }
        } else {
            return 0;
        }
        while (peek(i).text == "[" && peek(i + 1).text == "]") i += 2;
        return i - from;
    }

    int parse_type() {
        std::vector<int> parts;
        const size_t len = scan_type(0);
        for (size_t i = 0; i < len; ++i) parts.push_back(consume());
        if (parts.empty()) parts.push_back(consume_error());
        return make_node("type", std::move(parts));
    }

    int parse_declaration_or_statement() {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();

        // Leading modifiers and annotations.
        std::vector<int> prefix;
        while (at_modifier() || at("@")) {
            if (at("@")) {
                prefix.push_back(consume());
                if (peek().kind == TokenKind::Identifier) prefix.push_back(consume());
                if (at("(")) prefix.push_back(parse_paren_run("annotation_args"));
            } else {
                prefix.push_back(consume());
            }
        }

        if (at_kw("class") || at_kw("interface") || at_kw("enum")) {
            return parse_class_decl(std::move(prefix));
        }
        if (at_kw("package") || at_kw("import")) {
            const std::string kind = peek().text == "package" ? "package_stmt" : "import_stmt";
            std::vector<int> kids = std::move(prefix);
            kids.push_back(consume());
            while (!at_eof() && !at(";")) kids.push_back(consume());
            kids.push_back(expect(";"));
            return make_node(kind, std::move(kids));
        }

        // Method? modifiers [type] name ( ... )
        {
            size_t i = scan_type(0);
            if (i > 0 && peek(i).kind == TokenKind::Identifier && peek(i + 1).text == "(") {
                return parse_method_decl(std::move(prefix));
            }
            // Constructor inside a class body: name ( ... ) {
            if (peek().kind == TokenKind::Identifier && peek(1).text == "(" && in_class_body_) {
                return parse_method_decl(std::move(prefix));
            }
        }

        int stmt = parse_statement();
        if (prefix.empty()) return stmt;
        prefix.push_back(stmt);
        return make_node("annotated", std::move(prefix));
    }

    int parse_class_decl(std::vector<int> prefix) {
        std::vector<int> kids = std::move(prefix);
        kids.push_back(consume());  // class/interface/enum
        if (peek().kind == TokenKind::Identifier) kids.push_back(consume());
        while (!at_eof() && !at("{") && !at(";")) kids.push_back(consume());  // extends etc.
        if (at("{")) {
            kids.push_back(parse_class_body());
        } else {
            kids.push_back(expect(";"));
        }
        return make_node("class_decl", std::move(kids));
    }

    int parse_class_body() {
        std::vector<int> kids;
        kids.push_back(expect("{"));
        const bool saved = in_class_body_;
        in_class_body_ = true;
        while (!at_eof() && !at("}")) {
            const size_t before = pos();
            kids.push_back(parse_declaration_or_statement());
            if (pos() == before) kids.push_back(consume_error());
        }
        in_class_body_ = saved;
        kids.push_back(expect("}"));
        return make_node("class_body", std::move(kids));
    }

    int parse_method_decl(std::vector<int> prefix) {
        std::vector<int> kids = std::move(prefix);
        if (!(peek().kind == TokenKind::Identifier && peek(1).text == "(")) {
            kids.push_back(parse_type());
        }
        if (peek().kind == TokenKind::Identifier) kids.push_back(consume());
        kids.push_back(parse_params());
        while (!at_eof() && !at("{") && !at(";")) kids.push_back(consume());  // throws
        if (at("{")) kids.push_back(parse_block());
        else kids.push_back(expect(";"));
        return make_node("method_decl", std::move(kids));
    }

    int parse_params() {
        std::vector<int> kids;
        kids.push_back(expect("("));
        while (!at_eof() && !at(")")) {
            std::vector<int> param;
            while (at_modifier() || at("@")) param.push_back(consume());
            if (scan_type(0) > 0) param.push_back(parse_type());
            if (at("...")) param.push_back(consume());
            if (peek().kind == TokenKind::Identifier) param.push_back(consume());
            while (at("[")) { param.push_back(consume()); param.push_back(expect("]")); }
            if (param.empty()) param.push_back(consume_error());
            kids.push_back(make_node("param", std::move(param)));
            if (at(",")) kids.push_back(consume());
        }
        kids.push_back(expect(")"));
        return make_node("params", std::move(kids));
    }

    // Consumes a balanced (...) run without interpreting the contents.
    int parse_paren_run(const std::string& kind) {
        std::vector<int> kids;
        int depth = 0;
        do {
            if (at("(")) ++depth;
            else if (at(")")) --depth;
            kids.push_back(consume());
        } while (!at_eof() && depth > 0);
        return make_node(kind, std::move(kids));
    }

    int parse_block() {
        DepthGuard guard(*this);
        std::vector<int> kids;
        kids.push_back(expect("{"));
        while (!at_eof() && !at("}")) {
            const size_t before = pos();
            if (guard.exceeded()) kids.push_back(consume_error());
            else kids.push_back(parse_declaration_or_statement());
            if (pos() == before) kids.push_back(consume_error());
        }
        kids.push_back(expect("}"));
        return make_node("block", std::move(kids));
    }

    bool looks_like_var_decl() const {
        const size_t len = scan_type(0);
        if (len == 0) return false;
        if (peek(len).kind != TokenKind::Identifier) return false;
        const std::string& after = peek(len + 1).text;
        return after == "=" || after == ";" || after == "," ||
               (after == "[" && peek(len + 2).text == "]");
    }

    int parse_statement() {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();

        if (at("{")) return parse_block();
        if (at(";")) return make_node("empty_stmt", {consume()});

        if (at_kw("if")) {
            std::vector<int> kids{consume()};
            kids.push_back(expect("("));
            kids.push_back(parse_expr());
            kids.push_back(expect(")"));
            kids.push_back(parse_statement());
            if (at_kw("else")) {
                std::vector<int> e{consume(), parse_statement()};
                kids.push_back(make_node("else_clause", std::move(e)));
            }
            return make_node("if_stmt", std::move(kids));
        }
        if (at_kw("while")) {
            std::vector<int> kids{consume()};
            kids.push_back(expect("("));
            kids.push_back(parse_expr());
            kids.push_back(expect(")"));
            if (at(";")) kids.push_back(consume());
            else kids.push_back(parse_statement());
            return make_node("while_stmt", std::move(kids));
        }
        if (at_kw("do")) {
            std::vector<int> kids{consume(), parse_statement()};
            if (at_kw("while")) {
                kids.push_back(consume());
                kids.push_back(expect("("));
                kids.push_back(parse_expr());
                kids.push_back(expect(")"));
            }
            kids.push_back(expect(";"));
            return make_node("do_stmt", std::move(kids));
        }
        if (at_kw("for")) return parse_for();
        if (at_kw("return")) {
            std::vector<int> kids{consume()};
            if (!at(";") && !at_eof() && !at("}")) kids.push_back(parse_expr());
            kids.push_back(expect(";"));
            return make_node("return_stmt", std::move(kids));
        }
        if (at_kw("throw")) {
            std::vector<int> kids{consume(), parse_expr()};
            kids.push_back(expect(";"));
            return make_node("throw_stmt", std::move(kids));
        }
        if (at_kw("break") || at_kw("continue")) {
            const std::string kind = peek().text == "break" ? "break_stmt" : "continue_stmt";
            std::vector<int> kids{consume()};
            if (peek().kind == TokenKind::Identifier) kids.push_back(consume());
            kids.push_back(expect(";"));
            return make_node(kind, std::move(kids));
        }
        if (at_kw("try")) {
            std::vector<int> kids{consume()};
            if (at("(")) kids.push_back(parse_paren_run("resource_spec"));
            kids.push_back(parse_block());
            while (at_kw("catch")) {
                std::vector<int> c{consume()};
                if (at("(")) c.push_back(parse_paren_run("catch_params"));
                c.push_back(parse_block());
                kids.push_back(make_node("catch_clause", std::move(c)));
            }
            if (at_kw("finally")) {
                std::vector<int> f{consume(), parse_block()};
                kids.push_back(make_node("finally_clause", std::move(f)));
            }
            return make_node("try_stmt", std::move(kids));
        }
        if (at_kw("switch")) {
            std::vector<int> kids{consume()};
            kids.push_back(expect("("));
            kids.push_back(parse_expr());
            kids.push_back(expect(")"));
            kids.push_back(parse_switch_body());
            return make_node("switch_stmt", std::move(kids));
        }
        if (at_kw("synchronized")) {
            std::vector<int> kids{consume()};
            if (at("(")) {
                kids.push_back(expect("("));
                kids.push_back(parse_expr());
                kids.push_back(expect(")"));
            }
            kids.push_back(parse_block());
            return make_node("synchronized_stmt", std::move(kids));
        }
        if (at_kw("assert")) {
            std::vector<int> kids{consume(), parse_expr()};
            if (at(":")) { kids.push_back(consume()); kids.push_back(parse_expr()); }
            kids.push_back(expect(";"));
            return make_node("assert_stmt", std::move(kids));
        }

        if (looks_like_var_decl()) return parse_var_decl(true);

        // Expression statement; missing ';' tolerated.
        std::vector<int> kids{parse_expr()};
        if (at(";")) kids.push_back(consume());
        return make_node("expr_stmt", std::move(kids));
    }

    int parse_switch_body() {
        std::vector<int> kids;
        kids.push_back(expect("{"));
        while (!at_eof() && !at("}")) {
            if (at_kw("case") || at_kw("default")) {
                std::vector<int> c{consume()};
                while (!at_eof() && !at(":") && !at("{") && !at("}")) c.push_back(consume());
                if (at(":")) c.push_back(consume());
                kids.push_back(make_node("case_label", std::move(c)));
                continue;
            }
            const size_t before = pos();
            kids.push_back(parse_declaration_or_statement());
            if (pos() == before) kids.push_back(consume_error());
        }
        kids.push_back(expect("}"));
        return make_node("switch_body", std::move(kids));
    }

    int parse_for() {
        std::vector<int> kids{consume()};  // for
        kids.push_back(expect("("));

        // Enhanced for: [type] ident : expr
        bool enhanced = false;
        {
            const size_t len = scan_type(0);
            if (len > 0 && peek(len).kind == TokenKind::Identifier && peek(len + 1).text == ":") {
                enhanced = true;
            }
        }
        if (enhanced) {
            kids.push_back(parse_type());
            kids.push_back(consume());  // loop variable
            kids.push_back(expect(":"));
            kids.push_back(parse_expr());
        } else {
            if (at(";")) kids.push_back(consume());
            else if (looks_like_var_decl()) kids.push_back(parse_var_decl(true));
            else { kids.push_back(parse_expr_list()); kids.push_back(expect(";")); }
            if (!at(";") && !at(")")) kids.push_back(parse_expr());
            kids.push_back(expect(";"));
            if (!at(")")) kids.push_back(parse_expr_list());
        }
        kids.push_back(expect(")"));
        if (at(";")) kids.push_back(consume());
        else kids.push_back(parse_statement());
        return make_node(enhanced ? "foreach_stmt" : "for_stmt", std::move(kids));
    }

    int parse_expr_list() {
        std::vector<int> kids{parse_expr()};
        while (at(",")) {
            kids.push_back(consume());
            kids.push_back(parse_expr());
        }
        return kids.size() == 1 ? kids[0] : make_node("expr_list", std::move(kids));
    }

    int parse_var_decl(bool expect_semi) {
        std::vector<int> kids{parse_type()};
        while (true) {
            std::vector<int> d;
            if (peek().kind == TokenKind::Identifier) d.push_back(consume());
            else d.push_back(consume_error());
            while (at("[")) { d.push_back(consume()); d.push_back(expect("]")); }
            if (at("=")) {
                d.push_back(consume());
                if (at("{")) d.push_back(parse_array_init());
                else d.push_back(parse_expr());
            }
            kids.push_back(make_node("declarator", std::move(d)));
            if (at(",")) { kids.push_back(consume()); continue; }
            break;
        }
        if (expect_semi) kids.push_back(expect(";"));
        return make_node("var_decl", std::move(kids));
    }

    int parse_array_init() {
        std::vector<int> kids{expect("{")};
        while (!at_eof() && !at("}")) {
            if (at("{")) kids.push_back(parse_array_init());
            else if (at(",")) kids.push_back(consume());
            else kids.push_back(parse_expr());
        }
        kids.push_back(expect("}"));
        return make_node("array_init", std::move(kids));
    }

    // Expression precedence ladder.
    int parse_expr() {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();
        return parse_assignment();
    }

    static bool is_assign_op(const std::string& t) {
        static const std::unordered_set<std::string> ops = {
            "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
        };
        return ops.count(t) > 0;
    }

    int parse_assignment() {
        int lhs = parse_ternary();
        if (!at_eof() && is_assign_op(peek().text)) {
            const bool aug = peek().text != "=";
            std::vector<int> kids{lhs, consume(), parse_assignment()};
            return make_node(aug ? "aug_assignment" : "assignment", std::move(kids));
        }
        return lhs;
    }

    int parse_ternary() {
        int cond = parse_binary(0);
        if (at("?")) {
            std::vector<int> kids{cond, consume(), parse_expr()};
            kids.push_back(expect(":"));
            kids.push_back(parse_ternary());
            return make_node("ternary_expr", std::move(kids));
        }
        return cond;
    }

    int binary_level(const std::string& t) const {
        static const std::vector<std::unordered_set<std::string>> levels = {
            {"||"}, {"&&"}, {"|"}, {"^"}, {"&"}, {"==", "!="},
            {"<", ">", "<=", ">=", "instanceof"}, {"<<", ">>", ">>>"},
            {"+", "-"}, {"*", "/", "%"},
        };
        for (size_t i = 0; i < levels.size(); ++i) {
            if (levels[i].count(t)) return static_cast<int>(i);
        }
        return -1;
    }

    int parse_binary(int min_level) {
        int lhs = parse_unary();
        while (!at_eof()) {
            const int level = binary_level(peek().text);
            if (level < min_level) break;
            const int op = consume();
            // instanceof takes a type on the right
            const bool is_instanceof =
                tree_.tokens[static_cast<size_t>(tree_.nodes[static_cast<size_t>(op)].token)]
                    .text == "instanceof";
            int rhs = is_instanceof ? parse_type() : parse_binary(level + 1);
            lhs = make_node("binary_expr", {lhs, op, rhs});
        }
        return lhs;
    }

    int parse_unary() {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();
        if (at("+") || at("-") || at("!") || at("~") || at("++") || at("--")) {
            return make_node("unary_expr", {consume(), parse_unary()});
        }
        // Cast: '(' type ')' followed by something that starts an operand.
        if (at("(")) {
            const size_t type_len = scan_type(1);
            if (type_len > 0 && peek(1 + type_len).text == ")") {
                const CodeToken& next = peek(2 + type_len);
                const bool operand_follows = next.kind == TokenKind::Identifier ||
                                             next.kind == TokenKind::Number ||
                                             next.kind == TokenKind::String ||
                                             next.text == "(" || next.text == "new";
                const bool primitive =
                    peek(1).kind == TokenKind::Keyword;  // (int) x style is unambiguous
                if (operand_follows && (primitive || next.kind != TokenKind::Operator)) {
                    std::vector<int> kids{consume(), parse_type()};
                    kids.push_back(expect(")"));
                    kids.push_back(parse_unary());
                    return make_node("cast_expr", std::move(kids));
                }
            }
        }
        return parse_postfix();
    }

    int parse_postfix() {
        int expr = parse_primary();
        while (!at_eof()) {
            if (at(".")) {
                const int dot = consume();
                int member = peek().kind == TokenKind::Identifier || at_kw("new") ||
                                     at_kw("this") || at_kw("class")
                                 ? consume()
                                 : consume_error();
                expr = make_node("member_expr", {expr, dot, member});
            } else if (at("(")) {
                expr = make_node("call", {expr, parse_args()});
            } else if (at("[")) {
                std::vector<int> kids{expr, consume()};
                if (!at("]")) kids.push_back(parse_expr());
                kids.push_back(expect("]"));
                expr = make_node("index_expr", std::move(kids));
            } else if (at("++") || at("--")) {
                expr = make_node("postfix_expr", {expr, consume()});
            } else if (at("::")) {
                std::vector<int> kids{expr, consume()};
                if (peek().kind == TokenKind::Identifier || at_kw("new")) kids.push_back(consume());
                expr = make_node("method_ref", std::move(kids));
            } else {
                break;
            }
        }
        return expr;
    }

    int parse_args() {
        std::vector<int> kids{expect("(")};
        while (!at_eof() && !at(")")) {
            kids.push_back(parse_expr());
            if (at(",")) kids.push_back(consume());
            else break;
        }
        kids.push_back(expect(")"));
        return make_node("args", std::move(kids));
    }

    int parse_primary() {
        const CodeToken& tok = peek();
        if (tok.kind == TokenKind::Number || tok.kind == TokenKind::String) return consume();
        if (at_kw("true") || at_kw("false") || at_kw("null") || at_kw("this") || at_kw("super")) {
            return consume();
        }
        if (at_kw("new")) {
            std::vector<int> kids{consume(), parse_type()};
            if (at("(")) kids.push_back(parse_args());
            while (at("[")) {
                std::vector<int> dim{consume()};
                if (!at("]")) dim.push_back(parse_expr());
                dim.push_back(expect("]"));
                kids.push_back(make_node("array_dim", std::move(dim)));
            }
            if (at("{")) kids.push_back(parse_array_init());
            return make_node("new_expr", std::move(kids));
        }
        if (tok.kind == TokenKind::Identifier) {
            // Lambda: ident -> expr
            if (peek(1).text == "->") {
                std::vector<int> kids{consume(), consume()};
                kids.push_back(at("{") ? parse_block() : parse_expr());
                return make_node("lambda_expr", std::move(kids));
            }
            return consume();
        }
        if (at("(")) {
            std::vector<int> kids{consume()};
            if (!at(")")) kids.push_back(parse_expr_list());
            kids.push_back(expect(")"));
            if (at("->")) {
                kids.push_back(consume());
                kids.push_back(at("{") ? parse_block() : parse_expr());
                return make_node("lambda_expr", std::move(kids));
            }
            return make_node("paren_expr", std::move(kids));
        }
        if (tok.kind == TokenKind::Keyword && primitive_words().count(tok.text) > 0) {
            return parse_type();  // e.g. int.class, int[]::new
        }
        return consume_error();
    }

    bool in_class_body_ = false;
};

// ---------------------------------------------------------------------------
// Python
// ---------------------------------------------------------------------------

class PythonParser : public TreeBuilder {
public:
    PythonParser(const std::string& source) : TreeBuilder(source, Lang::Python) {}

    SyntaxTree parse() {
        std::vector<int> items;
        while (!at_eof()) {
            const size_t before = pos();
            items.push_back(parse_statement(current_indent()));
            if (pos() == before) items.push_back(consume_error());
        }
        items.push_back(consume());  // EOF leaf
        return finish(make_node("module", std::move(items)));
    }

private:
    // Column of the first token on the current token's line. Tokens inside
    // brackets continue the logical line, which statement parsing respects
    // via bracket depth rather than lookups here.
    int current_indent() const { return peek().column; }

    bool token_starts_line(size_t ahead = 0) const {
        const CodeToken& tok = peek(ahead);
        return tok.leading_trivia.find('\n') != std::string::npos ||
               (tok.offset == 0 && ahead == 0 && pos() == 0);
    }

    /// True when the current token begins a new logical line at an indent
    /// column <= `indent` (i.e. the suite at `indent` has ended).
    bool line_break_at_or_below(int indent) const {
        return token_starts_line() && peek().column <= indent;
    }

    bool at_statement_end() const {
        return at_eof() || at(";") || (token_starts_line() && bracket_depth_ == 0);
    }

    int parse_statement(int stmt_indent) {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();

        if (at_kw("def") || (at_kw("async") && peek(1).text == "def")) {
            std::vector<int> kids;
            if (at_kw("async")) kids.push_back(consume());
            kids.push_back(consume());  // def
            if (peek().kind == TokenKind::Identifier) kids.push_back(consume());
            kids.push_back(parse_params());
            if (at("->")) { kids.push_back(consume()); kids.push_back(parse_expr()); }
            kids.push_back(parse_suite(stmt_indent));
            return make_node("function_def", std::move(kids));
        }
        if (at_kw("class")) {
            std::vector<int> kids{consume()};
            if (peek().kind == TokenKind::Identifier) kids.push_back(consume());
            if (at("(")) kids.push_back(parse_call_args());
            kids.push_back(parse_suite(stmt_indent));
            return make_node("class_def", std::move(kids));
        }
        if (at_kw("if") || at_kw("elif")) {
            const bool elif = peek().text == "elif";
            std::vector<int> kids{consume(), parse_expr()};
            kids.push_back(parse_suite(stmt_indent));
            if (token_starts_line() && peek().column == stmt_indent &&
                (at_kw("elif") || at_kw("else"))) {
                if (at_kw("elif")) {
                    kids.push_back(parse_statement(stmt_indent));
                } else {
                    std::vector<int> e{consume(), parse_suite(stmt_indent)};
                    kids.push_back(make_node("else_clause", std::move(e)));
                }
            }
            return make_node(elif ? "elif_clause" : "if_stmt", std::move(kids));
        }
        if (at_kw("while")) {
            std::vector<int> kids{consume(), parse_expr()};
            kids.push_back(parse_suite(stmt_indent));
            kids.push_back(parse_optional_else(stmt_indent));
            return make_node("while_stmt", std::move(kids));
        }
        if (at_kw("for") || (at_kw("async") && peek(1).text == "for")) {
            std::vector<int> kids;
            if (at_kw("async")) kids.push_back(consume());
            kids.push_back(consume());  // for
            kids.push_back(parse_target_list());
            if (at_kw("in")) { kids.push_back(consume()); kids.push_back(parse_expr_list()); }
            kids.push_back(parse_suite(stmt_indent));
            kids.push_back(parse_optional_else(stmt_indent));
            return make_node("for_stmt", std::move(kids));
        }
        if (at_kw("try")) {
            std::vector<int> kids{consume(), parse_suite(stmt_indent)};
            while (token_starts_line() && peek().column == stmt_indent && at_kw("except")) {
                std::vector<int> c{consume()};
                if (!at(":")) {
                    c.push_back(parse_expr());
                    if (at_kw("as")) {
                        c.push_back(consume());
                        if (peek().kind == TokenKind::Identifier) c.push_back(consume());
                    }
                }
                c.push_back(parse_suite(stmt_indent));
                kids.push_back(make_node("except_clause", std::move(c)));
            }
            kids.push_back(parse_optional_else(stmt_indent));
            if (token_starts_line() && peek().column == stmt_indent && at_kw("finally")) {
                std::vector<int> f{consume(), parse_suite(stmt_indent)};
                kids.push_back(make_node("finally_clause", std::move(f)));
            }
            return make_node("try_stmt", std::move(kids));
        }
        if (at_kw("with") || (at_kw("async") && peek(1).text == "with")) {
            std::vector<int> kids;
            if (at_kw("async")) kids.push_back(consume());
            kids.push_back(consume());
            kids.push_back(parse_expr_list());
            if (at_kw("as")) { kids.push_back(consume()); kids.push_back(parse_target_list()); }
            kids.push_back(parse_suite(stmt_indent));
            return make_node("with_stmt", std::move(kids));
        }
        return parse_simple_statement_line();
    }

    int parse_optional_else(int stmt_indent) {
        if (token_starts_line() && peek().column == stmt_indent && at_kw("else")) {
            std::vector<int> e{consume(), parse_suite(stmt_indent)};
            return make_node("else_clause", std::move(e));
        }
        return -1;
    }

    // ':' then either inline statements or an indented block.
    int parse_suite(int header_indent) {
        std::vector<int> kids;
        kids.push_back(expect(":"));
        if (!token_starts_line() && !at_eof()) {
            // Inline suite: simple statements on the header line.
            kids.push_back(parse_simple_statement_line());
            return make_node("block", std::move(kids));
        }
        if (at_eof() || peek().column <= header_indent) {
            // Missing body.
            return make_node("block", std::move(kids), /*error=*/true);
        }
        const int body_indent = peek().column;
        while (!at_eof() && token_starts_line() && peek().column >= body_indent) {
            const size_t before = pos();
            kids.push_back(parse_statement(peek().column));
            if (pos() == before) kids.push_back(consume_error());
        }
        return make_node("block", std::move(kids));
    }

    // One logical line of ';'-separated simple statements.
    int parse_simple_statement_line() {
        std::vector<int> stmts;
        while (true) {
            stmts.push_back(parse_simple_statement());
            if (at(";")) {
                stmts.push_back(consume());
                if (at_statement_end()) break;
                continue;
            }
            break;
        }
        return stmts.size() == 1 ? stmts[0] : make_node("stmt_list", std::move(stmts));
    }

    int parse_simple_statement() {
        if (at_kw("return")) {
            std::vector<int> kids{consume()};
            if (!at_statement_end()) kids.push_back(parse_expr_list());
            return make_node("return_stmt", std::move(kids));
        }
        if (at_kw("pass")) return make_node("pass_stmt", {consume()});
        if (at_kw("break")) return make_node("break_stmt", {consume()});
        if (at_kw("continue")) return make_node("continue_stmt", {consume()});
        if (at_kw("raise")) {
            std::vector<int> kids{consume()};
            if (!at_statement_end()) kids.push_back(parse_expr_list());
            return make_node("raise_stmt", std::move(kids));
        }
        if (at_kw("import") || at_kw("from")) {
            std::vector<int> kids{consume()};
            while (!at_statement_end()) kids.push_back(consume());
            return make_node("import_stmt", std::move(kids));
        }
        if (at_kw("global") || at_kw("nonlocal")) {
            std::vector<int> kids{consume()};
            while (!at_statement_end()) kids.push_back(consume());
            return make_node("global_stmt", std::move(kids));
        }
        if (at_kw("del")) {
            std::vector<int> kids{consume(), parse_expr_list()};
            return make_node("del_stmt", std::move(kids));
        }
        if (at_kw("assert")) {
            std::vector<int> kids{consume(), parse_expr_list()};
            return make_node("assert_stmt", std::move(kids));
        }
        if (at_kw("yield")) {
            std::vector<int> kids{consume()};
            if (at_kw("from")) kids.push_back(consume());
            if (!at_statement_end()) kids.push_back(parse_expr_list());
            return make_node("yield_stmt", std::move(kids));
        }
        if (at("@")) {  // decorator
            std::vector<int> kids{consume(), parse_expr()};
            return make_node("decorator", std::move(kids));
        }

        // Assignment or bare expression.
        int first = parse_expr_list();
        if (at("=")) {
            std::vector<int> kids{first};
            while (at("=")) {
                kids.push_back(consume());
                kids.push_back(parse_expr_list());
            }
            return make_node("assignment", std::move(kids));
        }
        static const std::unordered_set<std::string> aug_ops = {
            "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "|=", "^=",
        };
        if (!at_eof() && aug_ops.count(peek().text) > 0) {
            std::vector<int> kids{first, consume(), parse_expr_list()};
            return make_node("aug_assignment", std::move(kids));
        }
        if (at(":") && bracket_depth_ == 0) {  // annotated assignment: x: T = v
            std::vector<int> kids{first, consume(), parse_expr()};
            if (at("=")) { kids.push_back(consume()); kids.push_back(parse_expr_list()); }
            return make_node("assignment", std::move(kids));
        }
        return make_node("expr_stmt", {first});
    }

    int parse_target_list() { return parse_expr_list(/*no_in=*/true); }

    int parse_expr_list(bool no_in = false) {
        std::vector<int> kids{parse_expr(no_in)};
        while (at(",") && bracket_depth_ == 0) {
            kids.push_back(consume());
            if (at_statement_end() || at("=") || at_kw("in")) break;
            kids.push_back(parse_expr(no_in));
        }
        return kids.size() == 1 ? kids[0] : make_node("tuple_expr", std::move(kids));
    }

    int parse_expr(bool no_in = false) {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();
        return parse_ternary(no_in);
    }

    int parse_ternary(bool no_in) {
        int body = parse_or(no_in);
        if (at_kw("if")) {
            std::vector<int> kids{body, consume(), parse_or(no_in)};
            if (at_kw("else")) { kids.push_back(consume()); kids.push_back(parse_expr(no_in)); }
            return make_node("ternary_expr", std::move(kids));
        }
        return body;
    }

    int parse_or(bool no_in) {
        int lhs = parse_and(no_in);
        while (at_kw("or")) lhs = make_node("binary_expr", {lhs, consume(), parse_and(no_in)});
        return lhs;
    }

    int parse_and(bool no_in) {
        int lhs = parse_not(no_in);
        while (at_kw("and")) lhs = make_node("binary_expr", {lhs, consume(), parse_not(no_in)});
        return lhs;
    }

    int parse_not(bool no_in) {
        if (at_kw("not")) return make_node("unary_expr", {consume(), parse_not(no_in)});
        return parse_comparison(no_in);
    }

    bool at_comparison_op(bool no_in) const {
        const std::string& t = peek().text;
        if (t == "==" || t == "!=" || t == "<" || t == ">" || t == "<=" || t == ">=") return true;
        if (at_kw("is")) return true;
        if (!no_in && at_kw("in")) return true;
        if (at_kw("not") && peek(1).text == "in" && !no_in) return true;
        return false;
    }

    int parse_comparison(bool no_in) {
        int lhs = parse_bitor();
        while (!at_eof() && at_comparison_op(no_in)) {
            std::vector<int> kids{lhs};
            if (at_kw("is")) {
                kids.push_back(consume());
                if (at_kw("not")) kids.push_back(consume());
            } else if (at_kw("not")) {
                kids.push_back(consume());
                kids.push_back(expect("in"));
            } else {
                kids.push_back(consume());
            }
            kids.push_back(parse_bitor());
            lhs = make_node("binary_expr", std::move(kids));
        }
        return lhs;
    }

    int parse_bitor() {
        int lhs = parse_bitxor();
        while (at("|")) lhs = make_node("binary_expr", {lhs, consume(), parse_bitxor()});
        return lhs;
    }
    int parse_bitxor() {
        int lhs = parse_bitand();
        while (at("^")) lhs = make_node("binary_expr", {lhs, consume(), parse_bitand()});
        return lhs;
    }
    int parse_bitand() {
        int lhs = parse_shift();
        while (at("&")) lhs = make_node("binary_expr", {lhs, consume(), parse_shift()});
        return lhs;
    }
    int parse_shift() {
        int lhs = parse_arith();
        while (at("<<") || at(">>")) {
            lhs = make_node("binary_expr", {lhs, consume(), parse_arith()});
        }
        return lhs;
    }
    int parse_arith() {
        int lhs = parse_term();
        while (at("+") || at("-")) {
            lhs = make_node("binary_expr", {lhs, consume(), parse_term()});
        }
        return lhs;
    }
    int parse_term() {
        int lhs = parse_factor();
        while (at("*") || at("/") || at("//") || at("%") || at("@")) {
            lhs = make_node("binary_expr", {lhs, consume(), parse_factor()});
        }
        return lhs;
    }
    int parse_factor() {
        DepthGuard guard(*this);
        if (guard.exceeded()) return consume_error();
        if (at("+") || at("-") || at("~")) {
            return make_node("unary_expr", {consume(), parse_factor()});
        }
        return parse_power();
    }
    int parse_power() {
        int base = parse_postfix();
        if (at("**")) return make_node("binary_expr", {base, consume(), parse_factor()});
        return base;
    }

    int parse_postfix() {
        int expr = parse_primary();
        while (!at_eof()) {
            if (at(".")) {
                const int dot = consume();
                const int member =
                    peek().kind == TokenKind::Identifier ? consume() : consume_error();
                expr = make_node("member_expr", {expr, dot, member});
            } else if (at("(")) {
                expr = make_node("call", {expr, parse_call_args()});
            } else if (at("[")) {
                ++bracket_depth_;
                std::vector<int> kids{expr, consume()};
                while (!at_eof() && !at("]")) {
                    if (at(":") || at(",")) kids.push_back(consume());
                    else kids.push_back(parse_expr());
                }
                --bracket_depth_;
                kids.push_back(expect("]"));
                expr = make_node("index_expr", std::move(kids));
            } else {
                break;
            }
        }
        return expr;
    }

    int parse_call_args() {
        ++bracket_depth_;
        std::vector<int> kids{expect("(")};
        while (!at_eof() && !at(")")) {
            if (at("*") || at("**")) kids.push_back(consume());
            // keyword argument: ident '=' expr
            if (peek().kind == TokenKind::Identifier && peek(1).text == "=") {
                std::vector<int> kw{consume(), consume(), parse_expr()};
                kids.push_back(make_node("kwarg", std::move(kw)));
            } else {
                kids.push_back(parse_expr());
            }
            if (at_kw("for")) kids.push_back(parse_comprehension_clauses());
            if (at(",")) kids.push_back(consume());
            else break;
        }
        --bracket_depth_;
        kids.push_back(expect(")"));
        return make_node("args", std::move(kids));
    }

    int parse_comprehension_clauses() {
        std::vector<int> kids;
        while (at_kw("for") || at_kw("if") || at_kw("async")) {
            if (at_kw("async")) kids.push_back(consume());
            if (at_kw("for")) {
                kids.push_back(consume());
                kids.push_back(parse_target_list());
                if (at_kw("in")) { kids.push_back(consume()); kids.push_back(parse_expr()); }
            } else {
                kids.push_back(consume());
                kids.push_back(parse_expr());
            }
        }
        return make_node("comprehension", std::move(kids));
    }

    int parse_params() {
        ++bracket_depth_;
        std::vector<int> kids{expect("(")};
        while (!at_eof() && !at(")")) {
            std::vector<int> p;
            if (at("*") || at("**")) p.push_back(consume());
            if (peek().kind == TokenKind::Identifier) p.push_back(consume());
            if (at(":")) { p.push_back(consume()); p.push_back(parse_expr()); }
            if (at("=")) { p.push_back(consume()); p.push_back(parse_expr()); }
            if (p.empty()) p.push_back(consume_error());
            kids.push_back(make_node("param", std::move(p)));
            if (at(",")) kids.push_back(consume());
        }
        --bracket_depth_;
        kids.push_back(expect(")"));
        return make_node("params", std::move(kids));
    }

    int parse_primary() {
        const CodeToken& tok = peek();
        if (tok.kind == TokenKind::Number) return consume();
        if (tok.kind == TokenKind::String) {
            int first = consume();
            while (peek().kind == TokenKind::String) {  // implicit concatenation
                first = make_node("string_concat", {first, consume()});
            }
            return first;
        }
        if (at_kw("True") || at_kw("False") || at_kw("None")) return consume();
        if (at_kw("lambda")) {
            std::vector<int> kids{consume()};
            while (!at_eof() && !at(":")) kids.push_back(consume());
            kids.push_back(expect(":"));
            kids.push_back(parse_expr());
            return make_node("lambda_expr", std::move(kids));
        }
        if (at_kw("await")) return make_node("unary_expr", {consume(), parse_expr()});
        if (tok.kind == TokenKind::Identifier) return consume();
        if (at("(")) {
            ++bracket_depth_;
            std::vector<int> kids{consume()};
            bool tuple = false;
            while (!at_eof() && !at(")")) {
                kids.push_back(parse_expr());
                if (at_kw("for")) kids.push_back(parse_comprehension_clauses());
                if (at(",")) { kids.push_back(consume()); tuple = true; }
                else break;
            }
            --bracket_depth_;
            kids.push_back(expect(")"));
            return make_node(tuple ? "tuple_expr" : "paren_expr", std::move(kids));
        }
        if (at("[")) {
            ++bracket_depth_;
            std::vector<int> kids{consume()};
            while (!at_eof() && !at("]")) {
                kids.push_back(parse_expr());
                if (at_kw("for")) kids.push_back(parse_comprehension_clauses());
                if (at(",")) kids.push_back(consume());
                else break;
            }
            --bracket_depth_;
            kids.push_back(expect("]"));
            return make_node("list_expr", std::move(kids));
        }
        if (at("{")) {
            ++bracket_depth_;
            std::vector<int> kids{consume()};
            bool dict = false;
            while (!at_eof() && !at("}")) {
                if (at("**")) kids.push_back(consume());
                kids.push_back(parse_expr());
                if (at(":")) {
                    dict = true;
                    kids.push_back(consume());
                    kids.push_back(parse_expr());
                }
                if (at_kw("for")) kids.push_back(parse_comprehension_clauses());
                if (at(",")) kids.push_back(consume());
                else break;
            }
            --bracket_depth_;
            kids.push_back(expect("}"));
            return make_node(dict ? "dict_expr" : "set_expr", std::move(kids));
        }
        if (at("*")) return make_node("unary_expr", {consume(), parse_expr()});
        return consume_error();
    }

    int bracket_depth_ = 0;
};

}  // namespace

SyntaxTree parse_code(const std::string& source, Lang language) {
    if (language == Lang::Java) return JavaParser(source).parse();
    return PythonParser(source).parse();
}

}  // namespace metrics
}  // namespace apg
