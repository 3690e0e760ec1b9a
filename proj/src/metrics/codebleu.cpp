#include "metrics/codebleu.hpp"

#include "core/error.hpp"
#include "metrics/bleu.hpp"
#include "metrics/dataflow.hpp"
#include "metrics/lexer.hpp"
#include "metrics/syntax.hpp"

namespace apg {
namespace metrics {

CodeBleuWeights CodeBleuWeights::make(double a, double b, double g, double d) {
    if (a < 0 || b < 0 || g < 0 || d < 0) {
        throw Error(ErrorCode::InvalidArgument, "codebleu weights must be nonnegative");
    }
    const double sum = a + b + g + d;
    if (sum <= 0) {
        throw Error(ErrorCode::InvalidArgument, "codebleu weights must not all be zero");
    }
    CodeBleuWeights w;
    w.alpha = a / sum;
    w.beta = b / sum;
    w.gamma = g / sum;
    w.delta = d / sum;
    return w;
}

CodeBleuResult codebleu(const std::string& candidate, const std::string& reference,
                        Lang language, const CodeBleuWeights& weights) {
    CodeBleuResult result;
    result.weights_used = weights;

    const std::vector<std::string> cand_tokens = code_tokens(candidate, language);
    const std::vector<std::string> ref_tokens = code_tokens(reference, language);
    result.bleu = bleu4(cand_tokens, {ref_tokens});
    result.weighted_ngram = weighted_ngram_match(cand_tokens, {ref_tokens}, language);

    const SyntaxTree cand_tree = parse_code(candidate, language);
    const SyntaxTree ref_tree = parse_code(reference, language);
    if (cand_tree.parse_degraded) result.degraded.push_back("candidate_parse_degraded");
    if (ref_tree.parse_degraded) result.degraded.push_back("reference_parse_degraded");
    result.syntax = syntax_match(cand_tree, ref_tree);

    const std::vector<DataflowEdge> ref_edges = extract_dataflow(ref_tree);
    double alpha = weights.alpha, beta = weights.beta, gamma = weights.gamma,
           delta = weights.delta;
    if (ref_edges.empty()) {
        // No semantic signal in the reference: drop the dataflow term.
        result.degraded.push_back("dataflow_dropped");
        result.dataflow = 0.0;
        const double remaining = alpha + beta + gamma;
        if (remaining > 0) {
            alpha /= remaining;
            beta /= remaining;
            gamma /= remaining;
        }
        delta = 0.0;
    } else {
        result.dataflow = dataflow_match(extract_dataflow(cand_tree), ref_edges);
    }
    result.weights_used.alpha = alpha;
    result.weights_used.beta = beta;
    result.weights_used.gamma = gamma;
    result.weights_used.delta = delta;

    result.value = alpha * result.bleu + beta * result.weighted_ngram + gamma * result.syntax +
                   delta * result.dataflow;
    return result;
}

}  // namespace metrics
}  // namespace apg
