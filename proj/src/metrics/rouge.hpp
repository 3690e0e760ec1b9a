#pragma once

#include <string>
#include <vector>

namespace apg {
namespace metrics {

/// ROUGE-L: LCS-based F-measure with recall weight beta = 1.2.
/// F = (1 + b^2) P R / (R + b^2 P); P = LCS/|candidate|, R = LCS/|reference|.
/// Empty candidate or reference scores 0.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference, double beta = 1.2);

/// Length of the longest common subsequence; exposed for oracle tests.
size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace metrics
}  // namespace apg
