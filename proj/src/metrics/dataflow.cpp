#include "metrics/dataflow.hpp"

#include <map>
#include <unordered_map>

namespace apg {
namespace metrics {

namespace {

class DataflowWalker {
public:
    explicit DataflowWalker(const SyntaxTree& tree) : tree_(tree) {
        scopes_.emplace_back();  // module scope
    }

    std::vector<DataflowEdge> run() {
        if (tree_.root >= 0) visit(tree_.root);
        return std::move(edges_);
    }

private:
    struct Def {
        int token = -1;
    };

    const SyntaxNode& node(int index) const { return tree_.node(index); }

    bool is_identifier_leaf(const SyntaxNode& n) const {
        return tree_.is_leaf(n) &&
               tree_.tokens[static_cast<size_t>(n.token)].kind == TokenKind::Identifier;
    }

    const std::string& token_text(int token) const {
        return tree_.tokens[static_cast<size_t>(token)].text;
    }
    int token_line(int token) const { return tree_.tokens[static_cast<size_t>(token)].line; }

    void define(const std::string& name, int token) { scopes_.back()[name] = Def{token}; }

    void read(const std::string& name, int token) {
        // Innermost visible definition.
        for (auto scope = scopes_.rbegin(); scope != scopes_.rend(); ++scope) {
            auto it = scope->find(name);
            if (it == scope->end()) continue;
            DataflowEdge edge;
            edge.variable = name;
            edge.def_token = it->second.token;
            edge.use_token = token;
            edge.def_line = token_line(it->second.token);
            edge.use_line = token_line(token);
            edge.relation = in_value_context_ ? DataflowRelation::ComputedFrom
                                              : DataflowRelation::ComesFrom;
            edges_.push_back(std::move(edge));
            return;
        }
    }

    void visit_children(const SyntaxNode& n) {
        for (int child : n.children) visit(child);
    }

    void visit(int index) {
        const SyntaxNode& n = node(index);
        if (n.is_error) return;  // only non-error regions contribute

        if (tree_.is_leaf(n)) {
            if (is_identifier_leaf(n)) read(token_text(n.token), n.token);
            return;
        }

        if (n.kind == "assignment") {
            visit_assignment(n);
        } else if (n.kind == "aug_assignment") {
            visit_aug_assignment(n);
        } else if (n.kind == "var_decl") {
            visit_var_decl(n);
        } else if (n.kind == "foreach_stmt") {
            visit_java_foreach(n);
        } else if (n.kind == "for_stmt" && tree_.language == Lang::Python) {
            visit_python_for(n);
        } else if (n.kind == "function_def" || n.kind == "method_decl") {
            visit_function(n);
        } else if (n.kind == "comprehension") {
            visit_comprehension(n);
        } else if (n.kind == "member_expr") {
            // object is a read; the attribute name is not a variable
            if (!n.children.empty()) visit(n.children.front());
        } else if (n.kind == "kwarg") {
            // keyword name is not a variable; value is
            for (size_t i = 1; i < n.children.size(); ++i) visit(n.children[i]);
        } else if (n.kind == "import_stmt" || n.kind == "package_stmt" ||
                   n.kind == "global_stmt" || n.kind == "type") {
            // no variable traffic
        } else {
            visit_children(n);
        }
    }

    bool is_op_leaf(const SyntaxNode& n, const char* text) const {
        return tree_.is_leaf(n) && token_text(n.token) == text;
    }

    // assignment children: target ('=' target)* '=' value   (value last)
    void visit_assignment(const SyntaxNode& n) {
        int last_eq = -1;
        for (size_t i = 0; i < n.children.size(); ++i) {
            if (is_op_leaf(node(n.children[i]), "=")) last_eq = static_cast<int>(i);
        }
        if (last_eq < 0) {  // annotated decl without value: x: T
            for (size_t i = 0; i < n.children.size(); ++i) {
                if (i == 0) define_targets(n.children[i]);
            }
            return;
        }
        // Value side first (reads see prior definitions).
        {
            ValueContext guard(*this);
            for (size_t i = static_cast<size_t>(last_eq) + 1; i < n.children.size(); ++i) {
                visit(n.children[i]);
            }
        }
        for (int i = 0; i < last_eq; ++i) {
            const SyntaxNode& child = node(n.children[static_cast<size_t>(i)]);
            if (tree_.is_leaf(child) && !is_identifier_leaf(child)) continue;  // '=' separators
            define_targets(n.children[static_cast<size_t>(i)]);
        }
    }

    // target op value: the target's old value is read, then redefined.
    void visit_aug_assignment(const SyntaxNode& n) {
        if (n.children.size() < 3) {
            visit_children(n);
            return;
        }
        {
            ValueContext guard(*this);
            visit(n.children[0]);  // old value read
            for (size_t i = 2; i < n.children.size(); ++i) visit(n.children[i]);
        }
        define_targets(n.children[0]);
    }

    // java: type declarator (',' declarator)* ';'
    void visit_var_decl(const SyntaxNode& n) {
        for (int child_index : n.children) {
            const SyntaxNode& child = node(child_index);
            if (child.kind != "declarator") continue;
            int name_token = -1;
            bool saw_eq = false;
            for (int dchild : child.children) {
                const SyntaxNode& d = node(dchild);
                if (is_identifier_leaf(d) && name_token < 0) {
                    name_token = d.token;
                } else if (is_op_leaf(d, "=")) {
                    saw_eq = true;
                } else if (saw_eq) {
                    ValueContext guard(*this);
                    visit(dchild);
                }
            }
            if (name_token >= 0) define(token_text(name_token), name_token);
        }
    }

    // for ( type ident : iterable ) body
    void visit_java_foreach(const SyntaxNode& n) {
        int loop_var = -1;
        bool past_colon = false;
        for (int child_index : n.children) {
            const SyntaxNode& child = node(child_index);
            if (is_identifier_leaf(child) && loop_var < 0 && !past_colon) {
                loop_var = child.token;
                define(token_text(loop_var), loop_var);
            } else if (is_op_leaf(child, ":")) {
                past_colon = true;
            } else {
                visit(child_index);
            }
        }
    }

    // for targets in iterable : block
    void visit_python_for(const SyntaxNode& n) {
        bool past_in = false;
        bool target_seen = false;
        for (int child_index : n.children) {
            const SyntaxNode& child = node(child_index);
            if (tree_.is_leaf(child) && child.kind == "token" &&
                token_text(child.token) == "in") {
                past_in = true;
                continue;
            }
            if (!past_in && !target_seen && !tree_.is_leaf(child)) {
                define_targets(child_index);
                target_seen = true;
            } else if (!past_in && is_identifier_leaf(child)) {
                define(token_text(child.token), child.token);
                target_seen = true;
            } else {
                visit(child_index);
            }
        }
    }

    void visit_function(const SyntaxNode& n) {
        // The function name is defined in the enclosing scope; parameters
        // and body live in a fresh scope.
        int params_index = -1;
        int name_token = -1;
        for (int child_index : n.children) {
            const SyntaxNode& child = node(child_index);
            if (child.kind == "params" && params_index < 0) {
                params_index = child_index;
                break;
            }
            if (is_identifier_leaf(child)) name_token = child.token;
        }
        if (name_token >= 0) define(token_text(name_token), name_token);

        scopes_.emplace_back();
        for (int child_index : n.children) {
            const SyntaxNode& child = node(child_index);
            if (child_index == params_index) {
                visit_params(child);
            } else if (!tree_.is_leaf(child) || is_identifier_leaf(child)) {
                if (is_identifier_leaf(child) && child.token == name_token) continue;
                if (child.kind == "type") continue;
                visit(child_index);
            }
        }
        scopes_.pop_back();
    }

    void visit_params(const SyntaxNode& params) {
        for (int child_index : params.children) {
            const SyntaxNode& child = node(child_index);
            if (child.kind != "param") continue;
            bool named = false;
            for (int pchild : child.children) {
                const SyntaxNode& p = node(pchild);
                if (is_identifier_leaf(p) && !named) {
                    define(token_text(p.token), p.token);
                    named = true;
                } else if (!tree_.is_leaf(p) && p.kind != "type") {
                    visit(pchild);  // defaults / annotations read
                }
            }
        }
    }

    // comprehension: ('for' target 'in' expr | 'if' expr)*
    void visit_comprehension(const SyntaxNode& n) {
        enum class Next { None, Target, Iterable, Condition } expect = Next::None;
        for (int child_index : n.children) {
            const SyntaxNode& child = node(child_index);
            if (tree_.is_leaf(child)) {
                const std::string& text = token_text(child.token);
                if (text == "for") expect = Next::Target;
                else if (text == "in") expect = Next::Iterable;
                else if (text == "if") expect = Next::Condition;
                else if (expect == Next::Target && is_identifier_leaf(child)) {
                    define(text, child.token);
                }
                continue;
            }
            if (expect == Next::Target) define_targets(child_index);
            else visit(child_index);
        }
    }

    // Assignment targets: identifiers define; components of composite
    // targets (tuples, subscripts, attributes) recurse; object bases in
    // a.b / a[i] targets are reads.
    void define_targets(int index) {
        const SyntaxNode& n = node(index);
        if (n.is_error) return;
        if (tree_.is_leaf(n)) {
            if (is_identifier_leaf(n)) define(token_text(n.token), n.token);
            return;
        }
        if (n.kind == "tuple_expr" || n.kind == "paren_expr" || n.kind == "list_expr") {
            for (int child : n.children) define_targets(child);
            return;
        }
        if (n.kind == "member_expr") {
            if (!n.children.empty()) visit(n.children.front());  // base object read
            return;
        }
        if (n.kind == "index_expr") {
            if (!n.children.empty()) visit(n.children.front());
            for (size_t i = 1; i < n.children.size(); ++i) visit(n.children[i]);
            return;
        }
        visit(index);  // fallback: treat as reads
    }

    struct ValueContext {
        DataflowWalker& walker;
        bool previous;
        explicit ValueContext(DataflowWalker& w) : walker(w), previous(w.in_value_context_) {
            w.in_value_context_ = true;
        }
        ~ValueContext() { walker.in_value_context_ = previous; }
    };

    const SyntaxTree& tree_;
    std::vector<std::unordered_map<std::string, Def>> scopes_;
    std::vector<DataflowEdge> edges_;
    bool in_value_context_ = false;
};

}  // namespace

std::vector<DataflowEdge> extract_dataflow(const SyntaxTree& tree) {
    return DataflowWalker(tree).run();
}

namespace {

// Alpha-rename variables by first appearance so consistently renamed code
// still matches; signature = (variable index, relation).
std::map<std::pair<int, int>, int> edge_signature_counts(
    const std::vector<DataflowEdge>& edges) {
    std::unordered_map<std::string, int> name_index;
    std::map<std::pair<int, int>, int> counts;
    for (const DataflowEdge& e : edges) {
        auto [it, inserted] = name_index.emplace(e.variable, static_cast<int>(name_index.size()));
        counts[{it->second, static_cast<int>(e.relation)}] += 1;
    }
    return counts;
}

}  // namespace

double dataflow_match(const std::vector<DataflowEdge>& candidate,
                      const std::vector<DataflowEdge>& reference) {
    if (reference.empty()) return 1.0;
    auto cand = edge_signature_counts(candidate);
    auto ref = edge_signature_counts(reference);

    int matched = 0;
    for (const auto& [signature, count] : ref) {
        auto it = cand.find(signature);
        if (it != cand.end()) matched += std::min(count, it->second);
    }
    return static_cast<double>(matched) / static_cast<double>(reference.size());
}

}  // namespace metrics
}  // namespace apg
