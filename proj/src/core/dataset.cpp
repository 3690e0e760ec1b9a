#include "core/dataset.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "core/error.hpp"
#include "core/text.hpp"

namespace apg {

using nlohmann::json;

std::string_view split_name(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Valid: return "valid";
        case Split::Test: return "test";
    }
    return "test";
}

Split parse_split(std::string_view name) {
    std::string n = to_lower(name);
    if (n == "train") return Split::Train;
    if (n == "valid" || n == "validation" || n == "dev") return Split::Valid;
    if (n == "test") return Split::Test;
    throw Error(ErrorCode::Config, "unknown split: " + std::string(name));
}

std::vector<std::string> validate_dataset(const Dataset& dataset) {
    std::vector<std::string> violations;
    std::unordered_set<std::string> seen_ids;

    for (const Sample& sample : dataset.samples) {
        if (sample.id.empty()) {
            violations.push_back("sample with empty id");
        } else if (!seen_ids.insert(sample.id).second) {
            violations.push_back("sample \"" + sample.id + "\": duplicate id");
        }

        if (!dataset.samples.empty() && !(sample.task == dataset.samples.front().task)) {
            violations.push_back("sample \"" + sample.id +
                                 "\": task differs from the dataset's task (" +
                                 sample.task.describe() + " vs " +
                                 dataset.samples.front().task.describe() + ")");
        }

        switch (sample.task.type) {
            case TaskType::CodeSummarization:
            case TaskType::CodeTranslation:
                if (sample.references.empty()) {
                    violations.push_back("sample \"" + sample.id +
                                         "\": references must be non-empty for " +
                                         std::string(task_type_name(sample.task.type)));
                }
                break;
            case TaskType::ApiRecommendation:
                if (sample.truth_apis.empty()) {
                    violations.push_back("sample \"" + sample.id +
                                         "\": truth_apis must be non-empty for api_recommendation");
                }
                break;
        }
        if (sample.input.empty()) {
            violations.push_back("sample \"" + sample.id + "\": empty input");
        }
    }
    return violations;
}

namespace {

TaskKind task_from_json(const json& obj, const std::string& id) {
    const std::string type_name = obj.at("task").get<std::string>();
    TaskType type = parse_task_type(type_name);
    switch (type) {
        case TaskType::CodeSummarization: {
            if (!obj.contains("lang")) {
                throw Error(ErrorCode::Config,
                            "sample \"" + id + "\": summarization requires a lang key");
            }
            return TaskKind::summarization(parse_lang(obj.at("lang").get<std::string>()));
        }
        case TaskType::CodeTranslation: {
            if (!obj.contains("source_lang") || !obj.contains("target_lang")) {
                throw Error(ErrorCode::Config,
                            "sample \"" + id + "\": translation requires source_lang and target_lang");
            }
            return TaskKind::translation(parse_lang(obj.at("source_lang").get<std::string>()),
                                         parse_lang(obj.at("target_lang").get<std::string>()));
        }
        case TaskType::ApiRecommendation: return TaskKind::api_recommendation();
    }
    throw Error(ErrorCode::Internal, "unreachable");
}

}  // namespace

Dataset load_dataset_jsonl(const std::string& path, Split split) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open dataset file: " + path);

    Dataset dataset;
    dataset.split = split;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Io, path + ":" + std::to_string(line_no) +
                                           ": invalid JSON: " + e.what());
        }
        Sample sample;
        try {
            sample.id = obj.at("id").get<std::string>();
            sample.task = task_from_json(obj, sample.id);
            sample.input = obj.at("input").get<std::string>();
            if (obj.contains("references")) {
                sample.references = obj.at("references").get<std::vector<std::string>>();
            }
            if (obj.contains("truth_apis")) {
                sample.truth_apis = obj.at("truth_apis").get<std::vector<std::string>>();
            }
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Io, path + ":" + std::to_string(line_no) +
                                           ": bad sample object: " + e.what());
        }
        dataset.samples.push_back(std::move(sample));
    }
    return dataset;
}

std::string dataset_fingerprint(const Dataset& dataset) {
    std::string acc;
    for (const Sample& s : dataset.samples) {
        acc += fnv1a64_hex(s.id);
        acc += fnv1a64_hex(s.input);
    }
    return fnv1a64_hex(acc);
}

}  // namespace apg
