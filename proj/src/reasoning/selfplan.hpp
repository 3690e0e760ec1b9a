#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/dataset.hpp"
#include "llm/client.hpp"

namespace apg {

/// High-level outline elicited in Self-Plan's first stage.
struct Plan {
    std::vector<std::string> steps;  // 1..max entries
    std::string source_sample_id;
    bool degraded = false;  // stage-1 output had no parsable numbered lines
};

struct SelfPlanConfig {
    int max_plan_steps = 8;
};

std::string selfplan_stage1_prompt(const std::string& instruction, const Sample& sample,
                                   int max_plan_steps);

/// Parses numbered lines ("1. ..." / "2) ...") into plan steps. Free-prose
/// output degrades to a single step holding the raw text.
Plan parse_plan(const std::string& stage1_output, const std::string& sample_id,
                int max_plan_steps);

/// "Plan:" header plus renumbered steps; the stage-2 prompt embeds this.
std::string render_plan(const Plan& plan);

/// Two-stage generation: elicit a plan, then condition the final output on
/// instruction + input + plan. Returns the plan and the final text.
std::pair<Plan, std::string> selfplan_run(LlmClient& client, const Sample& sample,
                                          const std::string& instruction,
                                          const SamplingParams& params,
                                          const SelfPlanConfig& config = {});

}  // namespace apg
