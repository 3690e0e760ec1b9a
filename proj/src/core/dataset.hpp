#pragma once

#include <string>
#include <vector>

#include "core/task.hpp"

namespace apg {

enum class Split { Train, Valid, Test };

std::string_view split_name(Split split);
Split parse_split(std::string_view name);

/// One task instance: the input (code snippet or NL query), ground-truth
/// outputs, and for API recommendation the ground-truth API set.
struct Sample {
    std::string id;
    TaskKind task;
    std::string input;
    std::vector<std::string> references;
    std::vector<std::string> truth_apis;
};

struct Dataset {
    std::vector<Sample> samples;
    Split split = Split::Test;
};

/// Returns one description per violated invariant (duplicate ids, missing
/// references / truth APIs, mixed tasks). Empty means the dataset is clean.
/// Violations are data, not faults.
std::vector<std::string> validate_dataset(const Dataset& dataset);

/// Reads the JSON Lines dataset format: one object per line with keys
/// id, task, lang / source_lang+target_lang, input, references, truth_apis.
/// Malformed lines or unknown identifiers throw; invariant violations do
/// not (run validate_dataset for those).
Dataset load_dataset_jsonl(const std::string& path, Split split);

/// Content hash over sample ids and inputs; cache key component.
std::string dataset_fingerprint(const Dataset& dataset);

}  // namespace apg
