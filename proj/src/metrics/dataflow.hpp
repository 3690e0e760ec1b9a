#pragma once

#include <string>
#include <vector>

#include "metrics/parser.hpp"

namespace apg {
namespace metrics {

enum class DataflowRelation { ComesFrom, ComputedFrom };

/// One def-use edge: a variable use linked to its nearest preceding
/// definition in program (token) order within the enclosing function
/// scope.
struct DataflowEdge {
    std::string variable;
    int def_token = -1;
    int use_token = -1;
    int def_line = 0;
    int use_line = 0;
    DataflowRelation relation = DataflowRelation::ComesFrom;
};

/// Straight-line def-use extraction: assignments, declarations, loop
/// variables and parameters define; identifier reads with a visible prior
/// definition emit an edge. Uses on the value side of an assignment are
/// ComputedFrom, all other reads ComesFrom. Error regions of degraded
/// trees are skipped. Branch-sensitive reaching definitions are out of
/// scope (nearest textual definition wins).
std::vector<DataflowEdge> extract_dataflow(const SyntaxTree& tree);

/// Fraction of reference edges present in the candidate (multiset match
/// after alpha-renaming variables by first appearance, so consistent
/// renamings still match). A reference with no edges matches vacuously.
double dataflow_match(const std::vector<DataflowEdge>& candidate,
                      const std::vector<DataflowEdge>& reference);

}  // namespace metrics
}  // namespace apg
