#include "reasoning/selfplan.hpp"

#include <cctype>

#include "core/prompt.hpp"
#include "core/text.hpp"

namespace apg {

std::string selfplan_stage1_prompt(const std::string& instruction, const Sample& sample,
                                   int max_plan_steps) {
    PromptSpec spec;
    spec.instruction = instruction;
    spec.input_payload = sample.input;
    std::string prompt = render_prompt(spec);
    prompt += "\n\nBefore solving the task, write a numbered plan of at most " +
              std::to_string(max_plan_steps) +
              " high-level steps outlining the overall structure, without implementation "
              "details. Respond with the plan only.";
    return prompt;
}

namespace {

// "3. step" / "3) step" -> "step"; empty result means the line is not a
// plan entry.
std::string numbered_line_body(const std::string& line) {
    size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == 0 || i >= line.size()) return "";
    if (line[i] != '.' && line[i] != ')') return "";
    return trim(line.substr(i + 1));
}

}  // namespace

Plan parse_plan(const std::string& stage1_output, const std::string& sample_id,
                int max_plan_steps) {
    Plan plan;
    plan.source_sample_id = sample_id;
    for (const std::string& raw : split_lines(stage1_output)) {
        const std::string body = numbered_line_body(trim(raw));
        if (body.empty()) continue;
        plan.steps.push_back(body);
        if (static_cast<int>(plan.steps.size()) >= max_plan_steps) break;
    }
    if (plan.steps.empty()) {
        plan.steps.push_back(trim(stage1_output));
        plan.degraded = true;
    }
    return plan;
}

std::string render_plan(const Plan& plan) {
    std::string out = "Plan:";
    for (size_t i = 0; i < plan.steps.size(); ++i) {
        out += "\n" + std::to_string(i + 1) + ". " + plan.steps[i];
    }
    return out;
}

std::pair<Plan, std::string> selfplan_run(LlmClient& client, const Sample& sample,
                                          const std::string& instruction,
                                          const SamplingParams& params,
                                          const SelfPlanConfig& config) {
    const Completion stage1 =
        client.complete(selfplan_stage1_prompt(instruction, sample, config.max_plan_steps),
                        params);
    Plan plan = parse_plan(stage1.text, sample.id, config.max_plan_steps);

    PromptSpec spec;
    spec.instruction = instruction;
    spec.input_payload = sample.input;
    spec.plan = render_plan(plan);
    const Completion stage2 = client.complete(render_prompt(spec), params);
    return {std::move(plan), stage2.text};
}

}  // namespace apg
