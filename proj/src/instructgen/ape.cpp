#include "instructgen/ape.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/prompt.hpp"
#include "core/text.hpp"
#include "instructgen/parse.hpp"

namespace apg {

std::string ape_generation_prompt(const TaskKind& task, const std::vector<DemoPair>& demos,
                                  int n_candidates) {
    std::string prompt =
        "I gave a friend an instruction for a " + std::string(task_type_name(task.type)) +
        " task. Based on the instruction, the friend produced the output below for every "
        "input. Here are the input-output pairs:\n";
    for (const DemoPair& demo : demos) {
        prompt += "\nInput: " + demo.first + "\nOutput: " + demo.second + "\n";
    }
    prompt += "\nWrite " + std::to_string(n_candidates) +
              " candidate instructions the friend could have been given. Wrap each "
              "instruction between <INS> and </INS> markers, one per line.";
    return prompt;
}

std::vector<CandidateInstruction> ape_generate_candidates(LlmClient& client, const TaskKind& task,
                                                          const std::vector<DemoPair>& demos,
                                                          const ApeConfig& config,
                                                          const SamplingParams& params) {
    if (config.n_candidates < 1) {
        throw Error(ErrorCode::InvalidArgument, "n_candidates must be positive");
    }
    const std::string prompt = ape_generation_prompt(task, demos, config.n_candidates);
    const Completion completion = client.complete(prompt, params);

    std::vector<std::string> parsed = parse_candidate_instructions(completion.text);
    if (parsed.empty()) {
        throw Error(ErrorCode::Optimization,
                    "no parsable candidate instructions in response: " + completion.text);
    }
    if (static_cast<int>(parsed.size()) > config.n_candidates) {
        parsed.resize(static_cast<size_t>(config.n_candidates));
    }

    std::vector<CandidateInstruction> out;
    out.reserve(parsed.size());
    for (std::string& text : parsed) {
        CandidateInstruction c;
        c.text = std::move(text);
        c.source = InstructionSource::Ape;
        c.iteration = 0;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::string> ape_scoring_targets(const Sample& sample, const ApeConfig& config) {
    if (!sample.references.empty()) {
        if (config.use_all_references) return sample.references;
        return {sample.references.front()};
    }
    if (!sample.truth_apis.empty()) {
        std::string joined;
        for (const std::string& api : sample.truth_apis) {
            if (!joined.empty()) joined += ", ";
            joined += api;
        }
        return {joined};
    }
    return {};
}

double ape_score(LlmClient& client, const CandidateInstruction& candidate,
                 const std::vector<Sample>& scoring_set, const ApeConfig& config,
                 int max_parallel) {
    if (scoring_set.empty()) {
        throw Error(ErrorCode::InvalidArgument, "ape_score: scoring set must be non-empty");
    }

    std::vector<double> per_sample(scoring_set.size(),
                                   std::numeric_limits<double>::quiet_NaN());
    std::vector<std::string> failures(scoring_set.size());

    parallel_for(scoring_set.size(), max_parallel, [&](size_t i) {
        const Sample& sample = scoring_set[i];
        try {
            const std::vector<std::string> targets = ape_scoring_targets(sample, config);
            if (targets.empty()) {
                failures[i] = sample.id;
                return;
            }
            PromptSpec spec;
            spec.instruction = candidate.text;
            spec.input_payload = sample.input;
            const std::string prompt = render_prompt(spec);

            double sum = 0.0;
            for (const std::string& target : targets) {
                sum += client.score_target_logprob(prompt, target, config.aggregate);
            }
            per_sample[i] = sum / static_cast<double>(targets.size());
        } catch (const std::exception&) {
            failures[i] = sample.id;
        }
    });

    std::string failed_ids;
    for (const std::string& id : failures) {
        if (id.empty()) continue;
        if (!failed_ids.empty()) failed_ids += ", ";
        failed_ids += id;
    }
    if (!failed_ids.empty()) {
        throw Error(ErrorCode::Partial, "ape_score: scoring failed for samples: " + failed_ids);
    }

    double sum = 0.0;
    for (double s : per_sample) sum += s;
    return sum / static_cast<double>(per_sample.size());
}

CandidateInstruction ape_select(const std::vector<CandidateInstruction>& candidates) {
    if (candidates.empty()) {
        throw Error(ErrorCode::InvalidArgument, "ape_select: no candidates");
    }
    const CandidateInstruction* best = nullptr;
    for (const CandidateInstruction& c : candidates) {
        if (!c.scored()) {
            throw Error(ErrorCode::InvalidArgument,
                        "ape_select: unscored candidate: " + c.text);
        }
        if (best == nullptr || c.score > best->score ||
            (c.score == best->score && c.text < best->text)) {
            best = &c;
        }
    }
    return *best;
}

CandidateInstruction run_ape(LlmClient& client, const TaskKind& task, const Dataset& train,
                             const Dataset& valid, const ApeConfig& config,
                             const SamplingParams& params, int max_parallel) {
    if (config.scoring_set_size < 1 ||
        static_cast<size_t>(config.scoring_set_size) > valid.samples.size()) {
        throw Error(ErrorCode::InvalidArgument,
                    "scoring_set_size must be in [1, validation size]; validation has " +
                        std::to_string(valid.samples.size()) + " samples");
    }

    std::vector<DemoPair> demos;
    for (const Sample& sample : train.samples) {
        if (static_cast<int>(demos.size()) >= config.n_demos) break;
        const std::vector<std::string> targets = ape_scoring_targets(sample, config);
        if (targets.empty()) continue;
        demos.emplace_back(sample.input, targets.front());
    }

    std::vector<CandidateInstruction> candidates =
        ape_generate_candidates(client, task, demos, config, params);

    const std::vector<Sample> scoring_set(
        valid.samples.begin(), valid.samples.begin() + config.scoring_set_size);
    for (CandidateInstruction& candidate : candidates) {
        candidate.score = ape_score(client, candidate, scoring_set, config, max_parallel);
    }
    return ape_select(candidates);
}

}  // namespace apg
