#include "harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "core/error.hpp"
#include "core/text.hpp"

namespace apg {

using nlohmann::json;

std::vector<std::string> task_metric_columns(TaskType type) {
    switch (type) {
        case TaskType::ApiRecommendation: return {"SR@1", "SR@3", "SR@5", "MRR"};
        case TaskType::CodeTranslation: return {"CB", "SM", "DM", "BLEU"};
        case TaskType::CodeSummarization: return {"BLEU", "ROUGE-L", "METEOR"};
    }
    return {};
}

ReportFormat parse_report_format(const std::string& name) {
    const std::string n = to_lower(name);
    if (n == "markdown" || n == "md") return ReportFormat::Markdown;
    if (n == "csv") return ReportFormat::Csv;
    if (n == "json") return ReportFormat::Json;
    throw Error(ErrorCode::Config, "unknown report format: \"" + name + "\"");
}

namespace {

std::string fmt(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

std::string fmt_signed(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%+.4f", value);
    return buf;
}

/// Methods achieving the best (maximum) mean per column; ties all count.
std::set<std::string> best_methods(const std::vector<MethodSummary>& methods,
                                   const std::string& column) {
    std::set<std::string> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (const MethodSummary& m : methods) {
        auto it = m.metrics.find(column);
        if (it == m.metrics.end()) continue;
        if (it->second.mean > best_value) {
            best_value = it->second.mean;
            best = {m.method};
        } else if (it->second.mean == best_value) {
            best.insert(m.method);
        }
    }
    return best;
}

}  // namespace

nlohmann::json summary_to_json(const StatSummary& summary) {
    json out;
    out["mean"] = summary.mean;
    out["std"] = summary.std;
    if (summary.cv_defined) out["cv"] = summary.cv;
    else out["cv"] = nullptr;
    out["n_runs"] = summary.n_runs;
    return out;
}

StatSummary summary_from_json(const nlohmann::json& doc) {
    StatSummary s;
    s.mean = doc.at("mean").get<double>();
    s.std = doc.at("std").get<double>();
    if (doc.contains("cv") && !doc.at("cv").is_null()) {
        s.cv = doc.at("cv").get<double>();
        s.cv_defined = true;
    } else {
        s.cv_defined = false;
    }
    s.n_runs = doc.at("n_runs").get<int>();
    return s;
}

std::string emit_report(const TaskKind& task, const std::vector<MethodSummary>& methods,
                        ReportFormat format) {
    if (methods.empty()) throw Error(ErrorCode::InvalidArgument, "emit_report: no summaries");

    // Column order: the task's fixed layout, then any extra metrics the
    // summaries carry (stable order).
    std::vector<std::string> columns = task_metric_columns(task.type);
    for (const MethodSummary& m : methods) {
        for (const auto& [metric, unused] : m.metrics) {
            if (std::find(columns.begin(), columns.end(), metric) == columns.end()) {
                columns.push_back(metric);
            }
        }
    }
    std::map<std::string, std::set<std::string>> best;
    for (const std::string& column : columns) best[column] = best_methods(methods, column);

    if (format == ReportFormat::Json) {
        json doc;
        doc["task"] = task.describe();
        doc["columns"] = columns;
        doc["methods"] = json::array();
        for (const MethodSummary& m : methods) {
            json row;
            row["method"] = m.method;
            for (const auto& [metric, summary] : m.metrics) {
                row["metrics"][metric] = summary_to_json(summary);
                if (auto it = m.per_run.find(metric); it != m.per_run.end()) {
                    row["metrics"][metric]["per_run"] = it->second;
                }
            }
            if (m.mean_instruction_tokens) {
                row["instruction_tokens"] = *m.mean_instruction_tokens;
            }
            doc["methods"].push_back(std::move(row));
        }
        for (const std::string& column : columns) {
            doc["best"][column] = std::vector<std::string>(best[column].begin(),
                                                           best[column].end());
        }
        return doc.dump(2) + "\n";
    }

    if (format == ReportFormat::Csv) {
        std::string out = "method";
        for (const std::string& c : columns) out += "," + c;
        out += "\n";
        for (const MethodSummary& m : methods) {
            out += m.method;
            for (const std::string& c : columns) {
                auto it = m.metrics.find(c);
                out += ",";
                if (it != m.metrics.end()) out += fmt(it->second.mean);
            }
            out += "\n";
        }
        return out;
    }

    // Markdown: best value per column in bold.
    std::string out = "### " + task.describe() + "\n\n";
    out += "| method |";
    for (const std::string& c : columns) out += " " + c + " |";
    out += "\n|---|";
    for (size_t i = 0; i < columns.size(); ++i) out += "---|";
    out += "\n";
    for (const MethodSummary& m : methods) {
        out += "| " + m.method + " |";
        for (const std::string& c : columns) {
            auto it = m.metrics.find(c);
            if (it == m.metrics.end()) {
                out += " |";
                continue;
            }
            const bool is_best = best[c].count(m.method) > 0;
            out += is_best ? " **" + fmt(it->second.mean) + "** |"
                           : " " + fmt(it->second.mean) + " |";
        }
        out += "\n";
    }

    // Token-efficiency companion table when instruction counts are known.
    std::vector<TokenEfficiencyRow> token_rows;
    for (const MethodSummary& m : methods) {
        if (m.mean_instruction_tokens) token_rows.push_back({m.method, *m.mean_instruction_tokens});
    }
    if (!token_rows.empty()) {
        out += "\n" + emit_token_report(token_rows, ReportFormat::Markdown);
    }
    return out;
}

std::string emit_token_report(const std::vector<TokenEfficiencyRow>& rows, ReportFormat format) {
    if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "emit_token_report: no rows");
    const double baseline = rows.front().mean_tokens;

    if (format == ReportFormat::Json) {
        json doc = json::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            json row;
            row["method"] = rows[i].method;
            row["mean_tokens"] = rows[i].mean_tokens;
            if (i == 0) row["delta"] = nullptr;
            else row["delta"] = rows[i].mean_tokens - baseline;
            doc.push_back(std::move(row));
        }
        return doc.dump(2) + "\n";
    }
    if (format == ReportFormat::Csv) {
        std::string out = "method,mean_tokens,delta\n";
        for (size_t i = 0; i < rows.size(); ++i) {
            out += rows[i].method + "," + fmt(rows[i].mean_tokens) + ",";
            if (i > 0) out += fmt_signed(rows[i].mean_tokens - baseline);
            out += "\n";
        }
        return out;
    }
    std::string out = "| method | mean instruction tokens | delta |\n|---|---|---|\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        out += "| " + rows[i].method + " | " + fmt(rows[i].mean_tokens) + " | ";
        if (i > 0) out += fmt_signed(rows[i].mean_tokens - baseline);
        out += " |\n";
    }
    return out;
}

std::string emit_comparison(const std::string& label_a, const std::string& label_b,
                            const std::vector<MetricComparison>& comparisons,
                            ReportFormat format,
                            const std::vector<TokenEfficiencyRow>& token_rows) {
    if (format == ReportFormat::Json) {
        json doc;
        doc["a"] = label_a;
        doc["b"] = label_b;
        doc["metrics"] = json::array();
        for (const MetricComparison& c : comparisons) {
            json row;
            row["metric"] = c.metric;
            row["mean_a"] = c.mean_a;
            row["mean_b"] = c.mean_b;
            row["delta"] = c.delta;
            if (std::isfinite(c.ttest.t_statistic)) row["t"] = c.ttest.t_statistic;
            else row["t"] = nullptr;  // degenerate zero-variance case
            row["p"] = c.ttest.p_value;
            row["n_pairs"] = c.ttest.n_pairs;
            row["significant_at_05"] = c.ttest.significant_at_05;
            row["degenerate"] = c.ttest.degenerate;
            doc["metrics"].push_back(std::move(row));
        }
        if (!token_rows.empty()) {
            doc["token_efficiency"] = json::parse(
                emit_token_report(token_rows, ReportFormat::Json));
        }
        return doc.dump(2) + "\n";
    }
    if (format == ReportFormat::Csv) {
        std::string out = "metric,mean_a,mean_b,delta,t,p,significant_at_05\n";
        for (const MetricComparison& c : comparisons) {
            out += c.metric + "," + fmt(c.mean_a) + "," + fmt(c.mean_b) + "," +
                   fmt_signed(c.delta) + ",";
            out += std::isfinite(c.ttest.t_statistic) ? fmt(c.ttest.t_statistic) : "";
            out += "," + fmt(c.ttest.p_value) + ",";
            out += c.ttest.significant_at_05 ? "yes" : "no";
            out += "\n";
        }
        if (!token_rows.empty()) {
            out += "\n" + emit_token_report(token_rows, ReportFormat::Csv);
        }
        return out;
    }
    std::string out = "### " + label_a + " vs " + label_b + "\n\n";
    out += "| metric | " + label_a + " | " + label_b + " | delta | t | p | sig. @0.05 |\n";
    out += "|---|---|---|---|---|---|---|\n";
    for (const MetricComparison& c : comparisons) {
        out += "| " + c.metric + " | " + fmt(c.mean_a) + " | " + fmt(c.mean_b) + " | " +
               fmt_signed(c.delta) + " | ";
        out += std::isfinite(c.ttest.t_statistic) ? fmt(c.ttest.t_statistic) : "inf";
        out += " | " + fmt(c.ttest.p_value) + " | ";
        out += c.ttest.significant_at_05 ? "yes" : "no";
        out += " |\n";
    }
    if (!token_rows.empty()) {
        out += "\n" + emit_token_report(token_rows, ReportFormat::Markdown);
    }
    return out;
}

}  // namespace apg
