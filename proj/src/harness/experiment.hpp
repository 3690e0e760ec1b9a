#pragma once

#include <map>
#include <string>
#include <vector>

#include "harness/config.hpp"
#include "harness/report.hpp"
#include "harness/stats.hpp"
#include "llm/client.hpp"

namespace apg {

struct PerSampleRecord {
    int run = 0;
    std::string sample_id;
    std::string metric;
    double value = 0.0;
    std::vector<std::string> degraded_flags;
};

struct RunReport {
    int run_index = 0;
    long seed = 0;
    std::string instruction;  // the instruction this run evaluated with
    std::map<std::string, double> aggregates;  // metric -> mean over samples
    std::vector<PerSampleRecord> records;
    bool partial = false;
    std::string failure;
};

struct ExperimentResult {
    std::string run_dir;
    std::vector<RunReport> runs;
    std::map<std::string, StatSummary> summary;
    bool complete = true;
};

/// Builds the configured backend: the scripted mock when mock_script is
/// set, the OpenAI-compatible client otherwise.
LlmClientPtr make_client(const ExperimentConfig& config);

/// Sentence-level metrics for one model output against a sample, in the
/// task's fixed column order. Degraded component names come back in
/// `flags`.
std::map<std::string, double> score_sample_output(const Sample& sample,
                                                  const std::string& output,
                                                  std::vector<std::string>& flags);

/// The experiment loop: `repeats` independent runs (derived seeds
/// base+run), per-sample generation and metrics, raw outputs and records
/// persisted to the run directory, reports emitted in the configured
/// formats. A mid-run provider failure marks the run partial, keeps
/// completed samples and stops; the result is flagged incomplete.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Re-aggregates a run directory from its persisted per-sample records and
/// rebuilds the report document (the audit path: every reported number must
/// be reproducible from raw records).
std::string rebuild_report(const std::string& run_dir, ReportFormat format);

/// Optimizer entry used by the optimize workflow: returns the selected
/// instruction and writes candidate/trajectory logs to the run directory.
std::string run_optimize(const ExperimentConfig& config, const std::string& out_dir);

/// Paired comparison of two run directories sharing a task and test set.
std::string run_compare(const std::string& run_dir_a, const std::string& run_dir_b,
                        ReportFormat format);

}  // namespace apg
