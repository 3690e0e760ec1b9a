#pragma once

#include <cstdint>
#include <vector>

#include "metrics/parser.hpp"

namespace apg {
namespace metrics {

/// Fraction of the reference's depth->=1 subtrees (non-leaf nodes below
/// the root) that occur in the candidate's subtree multiset. Subtree
/// identity is kind-labeled shape with identifier/number/string leaves
/// anonymized. A reference with no such subtree matches vacuously (1.0).
double syntax_match(const SyntaxTree& candidate, const SyntaxTree& reference);

/// Structural hash per internal node; exposed so tests can cross-check the
/// enumeration against an independent string-based oracle.
std::vector<std::uint64_t> subtree_shape_hashes(const SyntaxTree& tree);

}  // namespace metrics
}  // namespace apg
