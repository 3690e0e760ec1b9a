#include "core/prompt.hpp"

#include "core/text.hpp"

namespace apg {

bool operator==(const Demonstration& a, const Demonstration& b) {
    return a.question == b.question && a.reasoning == b.reasoning && a.answer == b.answer;
}

bool PromptSpec::operator==(const PromptSpec& other) const {
    return instruction == other.instruction && input_payload == other.input_payload &&
           reasoning_directive == other.reasoning_directive &&
           demonstrations == other.demonstrations && plan == other.plan;
}

namespace {

std::string render_demo(const Demonstration& demo) {
    std::string block = "Q: " + normalize_section(demo.question);
    block += "\nA: Let's think step by step. " + normalize_section(demo.reasoning);
    block += "\nAnswer: " + normalize_section(demo.answer);
    return block;
}

}  // namespace

std::string render_prompt(const PromptSpec& spec) {
    std::vector<std::string> sections;
    auto push = [&sections](std::string s) {
        if (!s.empty()) sections.push_back(std::move(s));
    };

    push(normalize_section(spec.instruction));
    for (const Demonstration& demo : spec.demonstrations) push(render_demo(demo));
    push(normalize_section(spec.input_payload));
    if (spec.plan) push(normalize_section(*spec.plan));
    if (spec.reasoning_directive) push(normalize_section(*spec.reasoning_directive));

    std::string out;
    for (size_t i = 0; i < sections.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += sections[i];
    }
    return out;
}

}  // namespace apg
