#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/task.hpp"
#include "harness/stats.hpp"

#include <json.hpp>

namespace apg {

/// Fixed metric column order per task, matching the evaluation tables.
std::vector<std::string> task_metric_columns(TaskType type);

enum class ReportFormat { Markdown, Csv, Json };
ReportFormat parse_report_format(const std::string& name);

struct MethodSummary {
    std::string method;
    std::map<std::string, StatSummary> metrics;
    std::map<std::string, std::vector<double>> per_run;  // run-level values per metric
    std::optional<double> mean_instruction_tokens;       // whitespace tokenizer
};

/// Per-task table: methods as rows, metrics as columns in the task's fixed
/// order, best value per column marked (all tied methods marked).
std::string emit_report(const TaskKind& task, const std::vector<MethodSummary>& methods,
                        ReportFormat format);

/// Token-efficiency table: one row per method with mean instruction tokens
/// and a signed delta against the first row's method.
struct TokenEfficiencyRow {
    std::string method;
    double mean_tokens = 0.0;
};
std::string emit_token_report(const std::vector<TokenEfficiencyRow>& rows, ReportFormat format);

/// Comparison of two runs: per-metric means, deltas, paired t-tests and
/// significance marks at 0.05.
struct MetricComparison {
    std::string metric;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double delta = 0.0;  // mean_b - mean_a
    TTestResult ttest;
};
std::string emit_comparison(const std::string& label_a, const std::string& label_b,
                            const std::vector<MetricComparison>& comparisons,
                            ReportFormat format,
                            const std::vector<TokenEfficiencyRow>& token_rows = {});

nlohmann::json summary_to_json(const StatSummary& summary);
StatSummary summary_from_json(const nlohmann::json& doc);

}  // namespace apg
