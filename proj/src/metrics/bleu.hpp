#pragma once

#include <string>
#include <vector>

#include "core/task.hpp"

namespace apg {
namespace metrics {

/// Sentence BLEU-4: geometric mean of modified 1..4-gram precisions with
/// +1 smoothing when a higher-order (n >= 2) precision has zero matches,
/// times the brevity penalty against the closest reference length.
/// Empty candidate scores 0. Result in [0, 1]; identical sequences give 1.
double bleu4(const std::vector<std::string>& candidate,
             const std::vector<std::vector<std::string>>& references);

/// Keyword-weighted BLEU-4 variant used inside CodeBLEU: each n-gram's
/// contribution is the mean of its token weights, where language keywords
/// weigh 4x ordinary tokens. Same smoothing and brevity penalty as bleu4.
double weighted_ngram_match(const std::vector<std::string>& candidate,
                            const std::vector<std::vector<std::string>>& references,
                            Lang language);

}  // namespace metrics
}  // namespace apg
