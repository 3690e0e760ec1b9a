#include "metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>

#include "core/error.hpp"
#include "metrics/lexer.hpp"

namespace apg {
namespace metrics {

namespace {

constexpr int kMaxOrder = 4;
constexpr double kKeywordWeight = 4.0;

using Ngram = std::vector<std::string>;

std::map<Ngram, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
    std::map<Ngram, int> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)] += 1;
    }
    return counts;
}

double brevity_penalty(size_t candidate_len,
                       const std::vector<std::vector<std::string>>& references) {
    // Closest reference length; ties favor the shorter reference.
    size_t best_ref = references.front().size();
    for (const auto& ref : references) {
        const auto diff = [&](size_t r) {
            return std::llabs(static_cast<long long>(r) - static_cast<long long>(candidate_len));
        };
        if (diff(ref.size()) < diff(best_ref) ||
            (diff(ref.size()) == diff(best_ref) && ref.size() < best_ref)) {
            best_ref = ref.size();
        }
    }
    if (candidate_len >= best_ref) return 1.0;
    if (candidate_len == 0) return 0.0;
    return std::exp(1.0 - static_cast<double>(best_ref) / static_cast<double>(candidate_len));
}

double token_weight(const std::string& token, Lang language) {
    return is_language_keyword(token, language) ? kKeywordWeight : 1.0;
}

double ngram_weight(const Ngram& gram, Lang language) {
    double sum = 0.0;
    for (const std::string& tok : gram) sum += token_weight(tok, language);
    return sum / static_cast<double>(gram.size());
}

/// Shared skeleton: when `language` is set, token weights apply; otherwise
/// all weights are 1 and this is plain BLEU-4.
double bleu_core(const std::vector<std::string>& candidate,
                 const std::vector<std::vector<std::string>>& references,
                 const Lang* language) {
    if (references.empty()) {
        throw Error(ErrorCode::InvalidArgument, "bleu4: references must be non-empty");
    }
    if (candidate.empty()) return 0.0;

    double log_sum = 0.0;
    for (int n = 1; n <= kMaxOrder; ++n) {
        std::map<Ngram, int> cand_counts = ngram_counts(candidate, n);

        // Clip against the max count across references.
        std::map<Ngram, int> max_ref_counts;
        for (const auto& ref : references) {
            for (const auto& [gram, count] : ngram_counts(ref, n)) {
                max_ref_counts[gram] = std::max(max_ref_counts[gram], count);
            }
        }

        double matched = 0.0;
        double total = 0.0;
        for (const auto& [gram, count] : cand_counts) {
            const double w = language ? ngram_weight(gram, *language) : 1.0;
            total += w * count;
            auto it = max_ref_counts.find(gram);
            if (it != max_ref_counts.end()) {
                matched += w * std::min(count, it->second);
            }
        }

        double precision;
        if (matched > 0.0) {
            precision = matched / total;
        } else if (n >= 2) {
            precision = (matched + 1.0) / (total + 1.0);  // +1 smoothing
        } else {
            return 0.0;  // no unigram overlap at all
        }
        log_sum += std::log(precision);
    }

    return brevity_penalty(candidate.size(), references) * std::exp(log_sum / kMaxOrder);
}

}  // namespace

double bleu4(const std::vector<std::string>& candidate,
             const std::vector<std::vector<std::string>>& references) {
    return bleu_core(candidate, references, nullptr);
}

double weighted_ngram_match(const std::vector<std::string>& candidate,
                            const std::vector<std::vector<std::string>>& references,
                            Lang language) {
    return bleu_core(candidate, references, &language);
}

}  // namespace metrics
}  // namespace apg
