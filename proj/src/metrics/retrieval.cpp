#include "metrics/retrieval.hpp"

#include "core/error.hpp"
#include "core/text.hpp"

namespace apg {
namespace metrics {

namespace {

std::string match_key(const std::string& api, bool case_insensitive) {
    const std::string normalized = normalize_api(api);
    return case_insensitive ? to_lower(normalized) : normalized;
}

void check_aligned(size_t predictions, size_t truths) {
    if (predictions != truths) {
        throw Error(ErrorCode::InvalidArgument,
                    "predictions and truths must be aligned: " + std::to_string(predictions) +
                        " vs " + std::to_string(truths));
    }
    if (predictions == 0) {
        throw Error(ErrorCode::InvalidArgument, "at least one query required");
    }
}

}  // namespace

TruthApis TruthApis::from_raw(const std::vector<std::string>& raw, bool case_insensitive) {
    TruthApis out;
    for (const std::string& api : raw) out.apis.push_back(match_key(api, case_insensitive));
    return out;
}

int first_relevant_rank(const ApiPrediction& prediction, const TruthApis& truth,
                        bool case_insensitive) {
    for (size_t i = 0; i < prediction.apis.size(); ++i) {
        const std::string key = match_key(prediction.apis[i], case_insensitive);
        for (const std::string& t : truth.apis) {
            if ((case_insensitive ? to_lower(t) : t) == key) return static_cast<int>(i) + 1;
        }
    }
    return 0;
}

double success_rate_at_k(const std::vector<ApiPrediction>& predictions,
                         const std::vector<TruthApis>& truths, int k, bool case_insensitive) {
    check_aligned(predictions.size(), truths.size());
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be positive");

    size_t hits = 0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const int rank = first_relevant_rank(predictions[i], truths[i], case_insensitive);
        if (rank > 0 && rank <= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

double mrr(const std::vector<ApiPrediction>& predictions, const std::vector<TruthApis>& truths,
           bool case_insensitive) {
    check_aligned(predictions.size(), truths.size());

    double sum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        const int rank = first_relevant_rank(predictions[i], truths[i], case_insensitive);
        if (rank > 0) sum += 1.0 / static_cast<double>(rank);
    }
    return sum / static_cast<double>(predictions.size());
}

}  // namespace metrics
}  // namespace apg
