#pragma once

#include <string>
#include <vector>

namespace apg {
namespace metrics {

/// METEOR-lite: unigram alignment by exact match, then Porter-stem match
/// (no synonym stage). F-mean weights recall 9:1
/// (F = 10PR / (R + 9P)); fragmentation penalty 0.5 * (chunks/matches)^3.
/// Score = F * (1 - penalty). Zero matches score 0. Note identity inputs
/// score below 1 by construction (penalty with chunks = 1).
double meteor_lite(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference);

struct MeteorAlignment {
    int matches = 0;
    int chunks = 0;
    // matched (candidate index, reference index) pairs sorted by candidate index
    std::vector<std::pair<int, int>> pairs;
};

/// Exposed for tests: greedy in-order alignment, exact stage then stems.
MeteorAlignment meteor_align(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference);

}  // namespace metrics
}  // namespace apg
