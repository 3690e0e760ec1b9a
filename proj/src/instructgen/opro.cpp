#include "instructgen/opro.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "core/error.hpp"
#include "instructgen/parse.hpp"

namespace apg {

namespace {

std::string format_score(double score) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", score);
    return buf;
}

}  // namespace

std::string opro_meta_prompt(const TaskKind& task, const std::vector<OproStep>& steps,
                             int top_k, int candidates_per_step, int round) {
    // Top-k by score, rendered ascending so the best sits closest to the
    // generation request.
    std::vector<const OproStep*> ranked;
    ranked.reserve(steps.size());
    for (const OproStep& s : steps) ranked.push_back(&s);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const OproStep* a, const OproStep* b) { return a->score > b->score; });
    if (static_cast<int>(ranked.size()) > top_k) ranked.resize(static_cast<size_t>(top_k));
    std::reverse(ranked.begin(), ranked.end());  // ascending

    std::string prompt = "Your task is to write an instruction for a " +
                         std::string(task_type_name(task.type)) +
                         " task. Below are previous instructions with their scores; higher "
                         "is better.\n";
    for (const OproStep* step : ranked) {
        prompt += "\nInstruction: " + step->instruction + "\nScore: " + format_score(step->score) +
                  "\n";
    }
    prompt += "\nRound " + std::to_string(round) + ". Write " +
              std::to_string(candidates_per_step) +
              " new instructions that would score higher than all instructions above. Wrap "
              "each instruction between <INS> and </INS> markers.";
    return prompt;
}

std::pair<CandidateInstruction, OproTrajectory> opro_optimize(
    LlmClient& client, const TaskKind& task, const std::string& seed_instruction,
    const OproEvalFn& eval_fn, const OproBudget& budget, const SamplingParams& params,
    int meta_prompt_top_k) {
    if (budget.max_steps < 0 || budget.candidates_per_step < 1 || budget.patience < 1) {
        throw Error(ErrorCode::InvalidArgument, "invalid opro budget");
    }

    OproTrajectory trajectory;
    trajectory.meta_prompt_top_k = meta_prompt_top_k;

    std::unordered_set<std::string> seen{whitespace_normalize(seed_instruction)};

    auto record = [&trajectory](const std::string& instruction, double score, int iteration) {
        trajectory.steps.push_back({instruction, score, iteration});
        if (!trajectory.best_so_far.scored() || score > trajectory.best_so_far.score) {
            trajectory.best_so_far.text = instruction;
            trajectory.best_so_far.score = score;
            trajectory.best_so_far.source =
                iteration == 0 ? InstructionSource::Manual : InstructionSource::Opro;
            trajectory.best_so_far.iteration = iteration;
            return true;
        }
        return false;
    };

    try {
        record(seed_instruction, eval_fn(seed_instruction), 0);
    } catch (const std::exception& e) {
        trajectory.aborted = true;
        trajectory.abort_reason = std::string("seed evaluation failed: ") + e.what();
        trajectory.best_so_far.text = seed_instruction;
        trajectory.best_so_far.score = std::numeric_limits<double>::quiet_NaN();
        return {trajectory.best_so_far, trajectory};
    }

    int stagnant_rounds = 0;
    for (int round = 1; round <= budget.max_steps; ++round) {
        const std::string meta = opro_meta_prompt(task, trajectory.steps, meta_prompt_top_k,
                                                  budget.candidates_per_step, round);
        Completion completion;
        try {
            completion = client.complete(meta, params);
        } catch (const std::exception& e) {
            trajectory.aborted = true;
            trajectory.abort_reason = std::string("proposal generation failed: ") + e.what();
            break;
        }

        std::vector<std::string> proposals = parse_candidate_instructions(completion.text);
        if (static_cast<int>(proposals.size()) > budget.candidates_per_step) {
            proposals.resize(static_cast<size_t>(budget.candidates_per_step));
        }

        bool improved = false;
        for (const std::string& proposal : proposals) {
            if (!seen.insert(whitespace_normalize(proposal)).second) continue;
            double score;
            try {
                score = eval_fn(proposal);
            } catch (const std::exception& e) {
                trajectory.aborted = true;
                trajectory.abort_reason =
                    "evaluation failed on \"" + proposal + "\": " + e.what();
                return {trajectory.best_so_far, trajectory};
            }
            if (!std::isfinite(score)) {
                trajectory.warnings.push_back("discarded candidate with non-finite score: " +
                                              proposal);
                continue;
            }
            improved = record(proposal, score, round) || improved;
        }

        if (improved) {
            stagnant_rounds = 0;
        } else if (++stagnant_rounds >= budget.patience) {
            break;
        }
    }

    return {trajectory.best_so_far, trajectory};
}

}  // namespace apg
