#pragma once

#include <string>
#include <vector>

namespace apg {
namespace metrics {

/// Ranked, deduplicated list of normalized API names (dotted paths).
struct ApiPrediction {
    std::vector<std::string> apis;
};

inline constexpr size_t kDefaultApiCap = 10;

/// Canonical form of an API mention: surrounding quotes/backticks and
/// punctuation stripped, trailing argument list removed. Idempotent.
std::string normalize_api(const std::string& raw);

/// Scans model output (numbered/bulleted lines, inline code spans, prose)
/// for dotted identifiers, normalizes them and keeps the first `cap`
/// distinct mentions in order of appearance. No candidates is an empty
/// prediction, not an error.
ApiPrediction extract_apis(const std::string& model_output, size_t cap = kDefaultApiCap);

}  // namespace metrics
}  // namespace apg
