#include "metrics/syntax.hpp"

#include <functional>
#include <unordered_map>

#include "core/text.hpp"

namespace apg {
namespace metrics {

namespace {

std::uint64_t combine(std::uint64_t h, std::uint64_t value) {
    h ^= value + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

std::vector<std::uint64_t> subtree_shape_hashes(const SyntaxTree& tree) {
    std::vector<std::uint64_t> internal_hashes;
    if (tree.root < 0) return internal_hashes;

    // Post-order structural hash: kind label folded with children hashes.
    // The root itself is excluded: counted subtrees hang at depth >= 1, so
    // a candidate containing every reference statement scores 1 even when
    // the top-level statement lists differ.
    std::function<std::uint64_t(int)> walk = [&](int index) -> std::uint64_t {
        const SyntaxNode& node = tree.node(index);
        std::uint64_t h = fnv1a64(tree.shape_kind(node));
        if (!tree.is_leaf(node)) {
            for (int child : node.children) h = combine(h, walk(child));
            if (index != tree.root) internal_hashes.push_back(h);
        }
        return h;
    };
    walk(tree.root);
    return internal_hashes;
}

double syntax_match(const SyntaxTree& candidate, const SyntaxTree& reference) {
    const std::vector<std::uint64_t> ref = subtree_shape_hashes(reference);
    if (ref.empty()) return 1.0;

    std::unordered_map<std::uint64_t, int> available;
    for (std::uint64_t h : subtree_shape_hashes(candidate)) available[h] += 1;

    size_t matched = 0;
    for (std::uint64_t h : ref) {
        auto it = available.find(h);
        if (it != available.end() && it->second > 0) {
            --it->second;
            ++matched;
        }
    }
    return static_cast<double>(matched) / static_cast<double>(ref.size());
}

}  // namespace metrics
}  // namespace apg
