#include "reasoning/cot.hpp"

#include "core/error.hpp"

namespace apg {

PromptSpec cot_augment(PromptSpec spec) {
    spec.reasoning_directive = std::string(kCotDirective);
    return spec;
}

PromptSpec compose_ape_cot(const TaskKind& task, const CandidateInstruction& ape_result,
                           const Sample& sample) {
    (void)task;  // the instruction already encodes the task
    if (ape_result.source != InstructionSource::Ape) {
        throw Error(ErrorCode::InvalidArgument,
                    "compose_ape_cot requires an APE-selected instruction (got source=" +
                        std::string(instruction_source_name(ape_result.source)) + ")");
    }
    PromptSpec spec;
    spec.instruction = ape_result.text;
    spec.input_payload = sample.input;
    return cot_augment(std::move(spec));
}

}  // namespace apg
