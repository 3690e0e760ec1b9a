#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core/candidate.hpp"
#include "core/task.hpp"
#include "llm/client.hpp"

namespace apg {

struct OproStep {
    std::string instruction;
    double score = 0.0;
    int iteration = 0;  // 0 = seed
};

struct OproTrajectory {
    std::vector<OproStep> steps;  // seed + every evaluated candidate, in order
    CandidateInstruction best_so_far;
    int meta_prompt_top_k = 8;
    std::vector<std::string> warnings;  // e.g. discarded non-finite scores
    bool aborted = false;               // eval_fn failure; steps up to the failure kept
    std::string abort_reason;
};

struct OproBudget {
    int max_steps = 10;
    int candidates_per_step = 4;
    int patience = 3;
};

/// Task metric on a validation subset; higher is better and finite.
using OproEvalFn = std::function<double(const std::string& instruction)>;

/// Meta-prompt for one round: the current top-k (instruction, score) pairs
/// sorted ascending by score (worst first, best last), a round marker, and
/// the request for new <INS>-wrapped candidates.
std::string opro_meta_prompt(const TaskKind& task, const std::vector<OproStep>& steps,
                             int top_k, int candidates_per_step, int round);

/// Iterative meta-prompt optimization. Terminates after max_steps rounds or
/// once best_so_far has not improved for `patience` consecutive rounds.
/// max_steps = 0 degenerates to evaluating the seed only.
std::pair<CandidateInstruction, OproTrajectory> opro_optimize(
    LlmClient& client, const TaskKind& task, const std::string& seed_instruction,
    const OproEvalFn& eval_fn, const OproBudget& budget, const SamplingParams& params,
    int meta_prompt_top_k = 8);

}  // namespace apg
