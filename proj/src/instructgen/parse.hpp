#pragma once

#include <string>
#include <vector>

namespace apg {

/// Key used to deduplicate instructions: trimmed, inner whitespace runs
/// collapsed to single spaces.
std::string whitespace_normalize(const std::string& text);

/// Extracts candidate instructions from a model response: segments between
/// <INS> and </INS> markers; when none are present, falls back to
/// splitting on nonempty lines (list bullets/numbering stripped). Exact
/// duplicates (whitespace-normalized) are removed, first occurrence wins.
std::vector<std::string> parse_candidate_instructions(const std::string& response);

}  // namespace apg
