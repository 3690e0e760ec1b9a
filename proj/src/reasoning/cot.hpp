#pragma once

#include <string_view>

#include "core/candidate.hpp"
#include "core/dataset.hpp"
#include "core/prompt.hpp"

namespace apg {

inline constexpr std::string_view kCotDirective = "Let's think step by step.";

/// Sets the zero-shot CoT reasoning directive. Idempotent: augmenting an
/// already-augmented spec returns it unchanged.
PromptSpec cot_augment(PromptSpec spec);

/// Combined method: APE-selected instruction plus the CoT directive around
/// the sample input. The instruction must come from APE (source check), so
/// the two construction paths (compose vs. cot_augment of the bare
/// APE-instructed spec) are structurally identical.
PromptSpec compose_ape_cot(const TaskKind& task, const CandidateInstruction& ape_result,
                           const Sample& sample);

}  // namespace apg
