#pragma once

#include <string>
#include <vector>

#include "metrics/api_extract.hpp"

namespace apg {
namespace metrics {

/// Ground-truth API set for one query, normalized on construction.
struct TruthApis {
    std::vector<std::string> apis;

    static TruthApis from_raw(const std::vector<std::string>& raw, bool case_insensitive = false);
};

/// Per-query hit rank (1-based) of the first relevant prediction, 0 when
/// none is relevant. Matching is normalized exact (case-sensitive by
/// default).
int first_relevant_rank(const ApiPrediction& prediction, const TruthApis& truth,
                        bool case_insensitive = false);

/// Fraction of queries with >= 1 relevant API in the top k.
double success_rate_at_k(const std::vector<ApiPrediction>& predictions,
                         const std::vector<TruthApis>& truths, int k,
                         bool case_insensitive = false);

/// Mean over queries of 1/rank of the first relevant API (0 when absent).
double mrr(const std::vector<ApiPrediction>& predictions, const std::vector<TruthApis>& truths,
           bool case_insensitive = false);

}  // namespace metrics
}  // namespace apg
