#pragma once

#include <string>
#include <string_view>

namespace apg {

enum class Lang { Java, Python };

enum class TaskType { CodeSummarization, CodeTranslation, ApiRecommendation };

Lang parse_lang(std::string_view name);          // throws Config on unknown name
std::string_view lang_name(Lang lang);           // lowercase ascii id
std::string_view task_type_name(TaskType type);  // canonical id used in JSONL files
TaskType parse_task_type(std::string_view name); // accepts canonical ids and CLI aliases

/// Task descriptor; language fields are meaningful per task type.
struct TaskKind {
    TaskType type = TaskType::ApiRecommendation;
    Lang lang = Lang::Java;         // summarization
    Lang source_lang = Lang::Java;  // translation
    Lang target_lang = Lang::Python;

    static TaskKind summarization(Lang lang);
    static TaskKind translation(Lang source, Lang target);  // throws if source == target
    static TaskKind api_recommendation();

    bool operator==(const TaskKind& other) const;

    /// Human/file identity, e.g. "translation:python->java".
    std::string describe() const;
};

/// The three stock prompt templates with their slot markers.
namespace basic_prompts {
inline constexpr std::string_view kSummarization = "Generate comments for [LANG] code.";
inline constexpr std::string_view kTranslation = "Translate the above [SOURCE] code to [TARGET].";
inline constexpr std::string_view kApiRecommendation =
    "Please recommend some suitable APIs for the given query.";
}  // namespace basic_prompts

/// Fills the template slots from the task fields. Never leaves a '[' marker.
std::string instantiate_basic_prompt(const TaskKind& task);

}  // namespace apg
