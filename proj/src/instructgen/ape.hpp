#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/candidate.hpp"
#include "core/dataset.hpp"
#include "llm/client.hpp"

namespace apg {

struct ApeConfig {
    int n_candidates = 20;
    int n_demos = 5;
    int scoring_set_size = 50;
    LogprobAggregate aggregate = LogprobAggregate::Mean;
    bool use_all_references = false;  // score against every reference, not just the first
};

using DemoPair = std::pair<std::string, std::string>;  // (input, reference output)

/// The instruction-induction prompt sent to the model; contains every demo
/// pair verbatim and asks for n_candidates instructions in <INS> markers.
std::string ape_generation_prompt(const TaskKind& task, const std::vector<DemoPair>& demos,
                                  int n_candidates);

/// Proposes up to n_candidates distinct instructions (whitespace-normalized
/// dedup), each tagged source=ape, iteration=0. Zero parsable candidates is
/// an optimization error naming the raw response.
std::vector<CandidateInstruction> ape_generate_candidates(LlmClient& client, const TaskKind& task,
                                                          const std::vector<DemoPair>& demos,
                                                          const ApeConfig& config,
                                                          const SamplingParams& params);

/// Mean over the scoring set of the target log-probability of each sample's
/// reference under instruction+input. Per-sample failures collect into one
/// partial-result error listing the failed sample ids.
double ape_score(LlmClient& client, const CandidateInstruction& candidate,
                 const std::vector<Sample>& scoring_set, const ApeConfig& config,
                 int max_parallel = 1);

/// Argmax by score; ties break to the lexicographically smallest text.
/// Empty input or unscored candidates are precondition errors.
CandidateInstruction ape_select(const std::vector<CandidateInstruction>& candidates);

/// Target text a sample is scored against: first reference, every
/// reference joined (use_all_references), or the truth-API list for API
/// recommendation samples without references.
std::vector<std::string> ape_scoring_targets(const Sample& sample, const ApeConfig& config);

/// Full pipeline: demos from the train split, candidates, scoring on the
/// leading scoring_set_size samples of the validation split, selection.
CandidateInstruction run_ape(LlmClient& client, const TaskKind& task, const Dataset& train,
                             const Dataset& valid, const ApeConfig& config,
                             const SamplingParams& params, int max_parallel = 1);

}  // namespace apg
