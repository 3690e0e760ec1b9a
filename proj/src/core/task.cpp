#include "core/task.hpp"

#include "core/error.hpp"
#include "core/text.hpp"

namespace apg {

Lang parse_lang(std::string_view name) {
    std::string n = to_lower(name);
    if (n == "java") return Lang::Java;
    if (n == "python") return Lang::Python;
    throw Error(ErrorCode::Config, "unknown language identifier: \"" + std::string(name) +
                                       "\" (expected java or python)");
}

std::string_view lang_name(Lang lang) {
    switch (lang) {
        case Lang::Java: return "java";
        case Lang::Python: return "python";
    }
    return "java";
}

std::string_view task_type_name(TaskType type) {
    switch (type) {
        case TaskType::CodeSummarization: return "summarization";
        case TaskType::CodeTranslation: return "translation";
        case TaskType::ApiRecommendation: return "api_recommendation";
    }
    return "api_recommendation";
}

TaskType parse_task_type(std::string_view name) {
    std::string n = to_lower(name);
    if (n == "summarization" || n == "summ" || n == "code_summarization") {
        return TaskType::CodeSummarization;
    }
    if (n == "translation" || n == "trans" || n == "code_translation") {
        return TaskType::CodeTranslation;
    }
    if (n == "api_recommendation" || n == "api-rec" || n == "apirec" || n == "api-recommendation") {
        return TaskType::ApiRecommendation;
    }
    throw Error(ErrorCode::Config, "unknown task: \"" + std::string(name) +
                                       "\" (expected summarization, translation or api-rec)");
}

TaskKind TaskKind::summarization(Lang lang) {
    TaskKind t;
    t.type = TaskType::CodeSummarization;
    t.lang = lang;
    return t;
}

TaskKind TaskKind::translation(Lang source, Lang target) {
    if (source == target) {
        throw Error(ErrorCode::InvalidArgument,
                    "translation source and target languages must differ");
    }
    TaskKind t;
    t.type = TaskType::CodeTranslation;
    t.source_lang = source;
    t.target_lang = target;
    return t;
}

TaskKind TaskKind::api_recommendation() {
    TaskKind t;
    t.type = TaskType::ApiRecommendation;
    return t;
}

bool TaskKind::operator==(const TaskKind& other) const {
    if (type != other.type) return false;
    switch (type) {
        case TaskType::CodeSummarization: return lang == other.lang;
        case TaskType::CodeTranslation:
            return source_lang == other.source_lang && target_lang == other.target_lang;
        case TaskType::ApiRecommendation: return true;
    }
    return false;
}

std::string TaskKind::describe() const {
    switch (type) {
        case TaskType::CodeSummarization:
            return "summarization:" + std::string(lang_name(lang));
        case TaskType::CodeTranslation:
            return "translation:" + std::string(lang_name(source_lang)) + "->" +
                   std::string(lang_name(target_lang));
        case TaskType::ApiRecommendation: return "api_recommendation";
    }
    return "?";
}

namespace {

std::string replace_slot(std::string text, std::string_view slot, std::string_view value) {
    size_t pos = text.find(slot);
    while (pos != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos = text.find(slot, pos + value.size());
    }
    return text;
}

}  // namespace

std::string instantiate_basic_prompt(const TaskKind& task) {
    switch (task.type) {
        case TaskType::CodeSummarization:
            return replace_slot(std::string(basic_prompts::kSummarization), "[LANG]",
                                lang_name(task.lang));
        case TaskType::CodeTranslation: {
            std::string s = replace_slot(std::string(basic_prompts::kTranslation), "[SOURCE]",
                                         lang_name(task.source_lang));
            return replace_slot(std::move(s), "[TARGET]", lang_name(task.target_lang));
        }
        case TaskType::ApiRecommendation:
            return std::string(basic_prompts::kApiRecommendation);
    }
    throw Error(ErrorCode::Internal, "unreachable task type");
}

}  // namespace apg
