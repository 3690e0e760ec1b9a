#pragma once

#include <optional>
#include <string>
#include <vector>

namespace apg {

/// One worked example shown before the task input.
struct Demonstration {
    std::string question;
    std::string reasoning;
    std::string answer;
};

/// Structured prompt: instruction, demonstrations, input payload, optional
/// plan, optional reasoning directive. Immutable by convention; construct a
/// new value instead of mutating a shared one.
struct PromptSpec {
    std::string instruction;
    std::string input_payload;
    std::optional<std::string> reasoning_directive;
    std::vector<Demonstration> demonstrations;
    std::optional<std::string> plan;

    bool operator==(const PromptSpec&) const;
};

bool operator==(const Demonstration&, const Demonstration&);

/// Renders the final prompt text. Section order is fixed: instruction,
/// demonstrations (one block each), input payload, plan, reasoning
/// directive. Present sections are normalized (no internal blank lines) and
/// joined by exactly one blank line; absent or empty sections are omitted.
std::string render_prompt(const PromptSpec& spec);

}  // namespace apg
