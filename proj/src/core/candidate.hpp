#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace apg {

enum class InstructionSource { Manual, Ape, Opro };

std::string_view instruction_source_name(InstructionSource source);

/// An instruction string with its score and provenance. score is NaN until
/// evaluated and finite afterwards; iteration is 0 for manual/seed
/// instructions.
struct CandidateInstruction {
    std::string text;
    double score = std::numeric_limits<double>::quiet_NaN();
    InstructionSource source = InstructionSource::Manual;
    int iteration = 0;

    bool scored() const { return std::isfinite(score); }
};

inline std::string_view instruction_source_name(InstructionSource source) {
    switch (source) {
        case InstructionSource::Manual: return "manual";
        case InstructionSource::Ape: return "ape";
        case InstructionSource::Opro: return "opro";
    }
    return "manual";
}

}  // namespace apg
