#pragma once

#include <string>
#include <vector>

#include "metrics/lexer.hpp"

namespace apg {
namespace metrics {

/// Concrete syntax tree node. Leaves wrap exactly one token (token >= 0);
/// internal nodes own children in token order. Spans nest: a node's
/// [first_token, last_token] contains all of its children's spans.
struct SyntaxNode {
    std::string kind;
    std::vector<int> children;  // indices into SyntaxTree::nodes
    int token = -1;             // leaf only
    int first_token = -1;
    int last_token = -1;
    bool is_error = false;
};

struct SyntaxTree {
    Lang language = Lang::Java;
    std::string source;
    std::vector<CodeToken> tokens;
    std::vector<SyntaxNode> nodes;
    int root = -1;
    bool parse_degraded = false;  // at least one error node present

    const SyntaxNode& node(int index) const { return nodes[static_cast<size_t>(index)]; }
    bool is_leaf(const SyntaxNode& n) const { return n.token >= 0; }

    /// Kind label used for structural (shape) comparison: internal nodes
    /// report their kind; identifier/number/string leaves are anonymized to
    /// their category, keyword/operator leaves keep their text.
    std::string shape_kind(const SyntaxNode& n) const;

    /// Concatenated leaf text (with leading trivia) in leaf order; equals
    /// `source` for every parse.
    std::string reconstruct_source() const;
};

/// Parses java or python source into a full-fidelity tree. Never throws on
/// malformed input: unparsable regions become error nodes and
/// parse_degraded is set.
SyntaxTree parse_code(const std::string& source, Lang language);

}  // namespace metrics
}  // namespace apg
