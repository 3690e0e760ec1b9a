#include "metrics/meteor.hpp"

#include <algorithm>
#include <cmath>

#include "metrics/stemmer.hpp"

namespace apg {
namespace metrics {

namespace {

constexpr double kRecallWeight = 9.0;
constexpr double kPenaltyWeight = 0.5;
constexpr double kPenaltyExponent = 3.0;

void align_stage(const std::vector<std::string>& cand, const std::vector<std::string>& ref,
                 std::vector<int>& cand_match, std::vector<int>& ref_used,
                 std::vector<std::pair<int, int>>& pairs) {
    for (size_t i = 0; i < cand.size(); ++i) {
        if (cand_match[i] >= 0) continue;
        for (size_t j = 0; j < ref.size(); ++j) {
            if (ref_used[j]) continue;
            if (cand[i] == ref[j]) {
                cand_match[i] = static_cast<int>(j);
                ref_used[j] = 1;
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
                break;
            }
        }
    }
}

}  // namespace

MeteorAlignment meteor_align(const std::vector<std::string>& candidate,
                             const std::vector<std::string>& reference) {
    MeteorAlignment out;
    std::vector<int> cand_match(candidate.size(), -1);
    std::vector<int> ref_used(reference.size(), 0);

    // Stage 1: exact surface match, greedy first-available in order.
    align_stage(candidate, reference, cand_match, ref_used, out.pairs);

    // Stage 2: Porter-stem match on the leftovers.
    std::vector<std::string> cand_stems, ref_stems;
    cand_stems.reserve(candidate.size());
    ref_stems.reserve(reference.size());
    for (const std::string& t : candidate) cand_stems.push_back(porter_stem(t));
    for (const std::string& t : reference) ref_stems.push_back(porter_stem(t));
    align_stage(cand_stems, ref_stems, cand_match, ref_used, out.pairs);

    std::sort(out.pairs.begin(), out.pairs.end());
    out.matches = static_cast<int>(out.pairs.size());

    for (size_t i = 0; i < out.pairs.size(); ++i) {
        const bool continues = i > 0 && out.pairs[i].first == out.pairs[i - 1].first + 1 &&
                               out.pairs[i].second == out.pairs[i - 1].second + 1;
        if (!continues) ++out.chunks;
    }
    return out;
}

double meteor_lite(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference) {
    if (candidate.empty() || reference.empty()) return 0.0;
    const MeteorAlignment alignment = meteor_align(candidate, reference);
    if (alignment.matches == 0) return 0.0;

    const double m = alignment.matches;
    const double precision = m / static_cast<double>(candidate.size());
    const double recall = m / static_cast<double>(reference.size());
    const double fmean = (1.0 + kRecallWeight) * precision * recall /
                         (recall + kRecallWeight * precision);
    const double penalty =
        kPenaltyWeight * std::pow(static_cast<double>(alignment.chunks) / m, kPenaltyExponent);
    return fmean * (1.0 - penalty);
}

}  // namespace metrics
}  // namespace apg
