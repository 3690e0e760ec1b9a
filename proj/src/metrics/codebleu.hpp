#pragma once

#include <string>
#include <vector>

#include "core/task.hpp"

namespace apg {
namespace metrics {

/// Component weights for (BLEU, weighted n-gram, syntax match, dataflow
/// match). Constructed weights are renormalized to sum to 1.
struct CodeBleuWeights {
    double alpha = 0.25;
    double beta = 0.25;
    double gamma = 0.25;
    double delta = 0.25;

    static CodeBleuWeights make(double a, double b, double g, double d);
};

struct CodeBleuResult {
    double value = 0.0;
    double bleu = 0.0;
    double weighted_ngram = 0.0;
    double syntax = 0.0;
    double dataflow = 0.0;
    CodeBleuWeights weights_used;
    std::vector<std::string> degraded;  // e.g. "candidate_parse_degraded", "dataflow_dropped"
};

/// CodeBLEU: alpha*BLEU + beta*weighted-n-gram + gamma*syntax_match +
/// delta*dataflow_match on lexer tokens / parse trees of the two code
/// texts. When the reference yields no dataflow edges the delta term is
/// dropped and the remaining weights renormalized.
CodeBleuResult codebleu(const std::string& candidate, const std::string& reference,
                        Lang language, const CodeBleuWeights& weights = {});

}  // namespace metrics
}  // namespace apg
