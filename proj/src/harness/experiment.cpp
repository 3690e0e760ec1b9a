#include "harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/prompt.hpp"
#include "core/text.hpp"
#include "harness/rundir.hpp"
#include "instructgen/tokens.hpp"
#include "llm/http_client.hpp"
#include "llm/mock_client.hpp"
#include "metrics/api_extract.hpp"
#include "metrics/bleu.hpp"
#include "metrics/codebleu.hpp"
#include "metrics/lexer.hpp"
#include "metrics/meteor.hpp"
#include "metrics/retrieval.hpp"
#include "metrics/rouge.hpp"
#include "reasoning/autocot.hpp"
#include "reasoning/cot.hpp"
#include "reasoning/selfplan.hpp"

namespace apg {

using nlohmann::json;

LlmClientPtr make_client(const ExperimentConfig& config) {
    if (!config.mock_script.empty()) return MockClient::from_file(config.mock_script);
    if (config.provider.endpoint_url.empty()) {
        throw Error(ErrorCode::Config,
                    "no provider endpoint configured; set endpoint= or use --mock");
    }
    return std::make_shared<OpenAiClient>(config.provider);
}

namespace {

/// First fenced code block when present; model chatter around code is
/// dropped before code metrics run.
std::string extract_code(const std::string& text) {
    const size_t open = text.find("```");
    if (open == std::string::npos) return text;
    const size_t content = text.find('\n', open);
    if (content == std::string::npos) return text;
    const size_t close = text.find("```", content + 1);
    if (close == std::string::npos) return trim(text.substr(content + 1));
    return text.substr(content + 1, close - content - 1);
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const std::string& f : flags) {
        if (!out.empty()) out += ",";
        out += f;
    }
    return out;
}

json task_spec_json(const TaskKind& task) {
    json spec;
    spec["task"] = std::string(task_type_name(task.type));
    switch (task.type) {
        case TaskType::CodeSummarization: spec["lang"] = std::string(lang_name(task.lang)); break;
        case TaskType::CodeTranslation:
            spec["source_lang"] = std::string(lang_name(task.source_lang));
            spec["target_lang"] = std::string(lang_name(task.target_lang));
            break;
        case TaskType::ApiRecommendation: break;
    }
    return spec;
}

TaskKind task_from_spec_json(const json& spec) {
    const TaskType type = parse_task_type(spec.at("task").get<std::string>());
    switch (type) {
        case TaskType::CodeSummarization:
            return TaskKind::summarization(parse_lang(spec.at("lang").get<std::string>()));
        case TaskType::CodeTranslation:
            return TaskKind::translation(parse_lang(spec.at("source_lang").get<std::string>()),
                                         parse_lang(spec.at("target_lang").get<std::string>()));
        case TaskType::ApiRecommendation: return TaskKind::api_recommendation();
    }
    throw Error(ErrorCode::Internal, "unreachable");
}

std::string sanitize_for_path(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    return s;
}

std::string run_dir_name(const ExperimentConfig& cfg) {
    return cfg.method + "-" + sanitize_for_path(cfg.task.describe()) + "-seed" +
           std::to_string(cfg.seed);
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    const json spec = task_spec_json(cfg.task);
    for (const auto& [key, value] : spec.items()) {
        out += key + " = " + value.get<std::string>() + "\n";
    }
    out += "method = " + cfg.method + "\n";
    if (!cfg.train_path.empty()) out += "train = " + cfg.train_path + "\n";
    if (!cfg.valid_path.empty()) out += "valid = " + cfg.valid_path + "\n";
    if (!cfg.test_path.empty()) out += "test = " + cfg.test_path + "\n";
    out += "repeats = " + std::to_string(cfg.repeats) + "\n";
    if (cfg.sample_cap) out += "sample_cap = " + std::to_string(*cfg.sample_cap) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "temperature = " + std::to_string(cfg.sampling.temperature) + "\n";
    out += "top_p = " + std::to_string(cfg.sampling.top_p) + "\n";
    out += "max_tokens = " + std::to_string(cfg.sampling.max_tokens) + "\n";
    if (!cfg.mock_script.empty()) out += "mock = " + cfg.mock_script + "\n";
    if (!cfg.provider.endpoint_url.empty()) out += "endpoint = " + cfg.provider.endpoint_url + "\n";
    if (!cfg.provider.model_name.empty()) out += "model = " + cfg.provider.model_name + "\n";
    if (!cfg.instruction_override.empty()) out += "instruction = " + cfg.instruction_override + "\n";
    return out;
}

Dataset load_validated(const std::string& path, Split split, const TaskKind& task) {
    if (path.empty()) {
        throw Error(ErrorCode::Config, "missing dataset path for split " +
                                           std::string(split_name(split)));
    }
    Dataset d = load_dataset_jsonl(path, split);
    const std::vector<std::string> violations = validate_dataset(d);
    if (!violations.empty()) {
        std::string msg = path + ": dataset invalid:";
        for (const std::string& v : violations) msg += "\n  - " + v;
        throw Error(ErrorCode::InvalidArgument, msg);
    }
    if (!d.samples.empty() && !(d.samples.front().task == task)) {
        throw Error(ErrorCode::InvalidArgument,
                    path + ": dataset task " + d.samples.front().task.describe() +
                        " does not match configured task " + task.describe());
    }
    return d;
}

}  // namespace

std::map<std::string, double> score_sample_output(const Sample& sample,
                                                  const std::string& output,
                                                  std::vector<std::string>& flags) {
    std::map<std::string, double> values;
    switch (sample.task.type) {
        case TaskType::CodeTranslation: {
            const std::string code = extract_code(output);
            const metrics::CodeBleuResult cb =
                metrics::codebleu(code, sample.references.front(), sample.task.target_lang);
            flags.insert(flags.end(), cb.degraded.begin(), cb.degraded.end());
            values["CB"] = cb.value;
            values["SM"] = cb.syntax;
            values["DM"] = cb.dataflow;
            values["BLEU"] = cb.bleu;
            break;
        }
        case TaskType::CodeSummarization: {
            const std::vector<std::string> cand = metrics::nl_tokenize(output);
            std::vector<std::vector<std::string>> refs;
            for (const std::string& r : sample.references) refs.push_back(metrics::nl_tokenize(r));
            const std::vector<std::string>& ref0 = refs.front();
            values["BLEU"] = metrics::bleu4(cand, refs);
            values["ROUGE-L"] = metrics::rouge_l(cand, ref0);
            values["METEOR"] = metrics::meteor_lite(cand, ref0);
            break;
        }
        case TaskType::ApiRecommendation: {
            const metrics::ApiPrediction prediction = metrics::extract_apis(output);
            const metrics::TruthApis truth = metrics::TruthApis::from_raw(sample.truth_apis);
            const int rank = metrics::first_relevant_rank(prediction, truth);
            values["SR@1"] = rank >= 1 && rank <= 1 ? 1.0 : 0.0;
            values["SR@3"] = rank >= 1 && rank <= 3 ? 1.0 : 0.0;
            values["SR@5"] = rank >= 1 && rank <= 5 ? 1.0 : 0.0;
            values["MRR"] = rank >= 1 ? 1.0 / rank : 0.0;
            if (prediction.apis.empty()) flags.push_back("no_apis_extracted");
            break;
        }
    }
    return values;
}

namespace {

/// Everything a run needs to build per-sample prompts.
struct MethodContext {
    std::string instruction;
    CandidateInstruction ape_candidate;  // ape_cot: compose path input
    std::vector<Demonstration> demos;
    bool cot = false;
    bool use_compose = false;  // ape_cot construction path
    bool selfplan = false;
};

std::string opro_eval_metric(TaskType type) {
    switch (type) {
        case TaskType::CodeTranslation: return "CB";
        case TaskType::CodeSummarization: return "ROUGE-L";
        case TaskType::ApiRecommendation: return "MRR";
    }
    return "CB";
}

SamplingParams run_sampling(const ExperimentConfig& cfg, long seed) {
    SamplingParams params = cfg.sampling;
    params.seed = seed;
    return params;
}

CandidateInstruction optimize_instruction_ape(const ExperimentConfig& cfg, LlmClient& client,
                                              const Dataset& train, const Dataset& valid,
                                              long seed,
                                              std::vector<CandidateInstruction>* all_out) {
    ApeConfig ape = cfg.ape;
    ape.scoring_set_size =
        std::min<int>(ape.scoring_set_size, static_cast<int>(valid.samples.size()));

    std::vector<DemoPair> demos;
    for (const Sample& sample : train.samples) {
        if (static_cast<int>(demos.size()) >= ape.n_demos) break;
        const std::vector<std::string> targets = ape_scoring_targets(sample, ape);
        if (targets.empty()) continue;
        demos.emplace_back(sample.input, targets.front());
    }

    std::vector<CandidateInstruction> candidates = ape_generate_candidates(
        client, cfg.task, demos, ape, run_sampling(cfg, seed));
    const std::vector<Sample> scoring_set(valid.samples.begin(),
                                          valid.samples.begin() + ape.scoring_set_size);
    for (CandidateInstruction& candidate : candidates) {
        candidate.score =
            ape_score(client, candidate, scoring_set, ape, cfg.provider.max_in_flight);
    }
    if (all_out) *all_out = candidates;
    return ape_select(candidates);
}

OproEvalFn make_opro_eval_fn(const ExperimentConfig& cfg, LlmClient& client,
                             const Dataset& valid, long seed) {
    const int subset = std::min<int>(cfg.eval_subset_size,
                                     static_cast<int>(valid.samples.size()));
    if (subset < 1) {
        throw Error(ErrorCode::InvalidArgument, "opro: validation split is empty");
    }
    std::vector<Sample> samples(valid.samples.begin(), valid.samples.begin() + subset);
    const std::string metric = opro_eval_metric(cfg.task.type);
    const SamplingParams params = run_sampling(cfg, seed);
    const int workers = cfg.provider.max_in_flight;

    return [&client, samples = std::move(samples), metric, params,
            workers](const std::string& instruction) {
        std::vector<double> values(samples.size(), 0.0);
        parallel_for(samples.size(), workers, [&](size_t i) {
            PromptSpec spec;
            spec.instruction = instruction;
            spec.input_payload = samples[i].input;
            const Completion completion = client.complete(render_prompt(spec), params);
            std::vector<std::string> flags;
            values[i] = score_sample_output(samples[i], completion.text, flags).at(metric);
        });
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum / static_cast<double>(values.size());
    };
}

MethodContext prepare_method(const ExperimentConfig& cfg, LlmClient& client,
                             const Dataset* train, const Dataset* valid, long seed,
                             std::vector<std::string>* notes) {
    MethodContext ctx;
    const std::string basic = instantiate_basic_prompt(cfg.task);

    if (cfg.method == "basic") {
        ctx.instruction = basic;
    } else if (cfg.method == "cot") {
        ctx.instruction = basic;
        ctx.cot = true;
    } else if (cfg.method == "selfplan") {
        ctx.instruction = basic;
        ctx.selfplan = true;
    } else if (cfg.method == "ape" || cfg.method == "ape_cot") {
        if (!cfg.instruction_override.empty()) {
            ctx.ape_candidate.text = cfg.instruction_override;
            ctx.ape_candidate.source = InstructionSource::Ape;
        } else {
            ctx.ape_candidate =
                optimize_instruction_ape(cfg, client, *train, *valid, seed, nullptr);
        }
        ctx.instruction = ctx.ape_candidate.text;
        if (cfg.method == "ape_cot") {
            ctx.cot = true;
            ctx.use_compose = true;
        }
    } else if (cfg.method == "opro") {
        if (!cfg.instruction_override.empty()) {
            ctx.instruction = cfg.instruction_override;
        } else {
            auto [best, trajectory] = opro_optimize(
                client, cfg.task, basic, make_opro_eval_fn(cfg, client, *valid, seed),
                cfg.opro, run_sampling(cfg, seed), cfg.opro_top_k);
            if (trajectory.aborted) {
                throw Error(ErrorCode::Partial, "opro aborted: " + trajectory.abort_reason);
            }
            ctx.instruction = best.text;
        }
    } else if (cfg.method == "autocot") {
        ctx.instruction = basic;
        const int k = std::min<int>(cfg.autocot_k, static_cast<int>(train->samples.size()));
        AutoCotConfig auto_cfg;
        auto_cfg.sampling = run_sampling(cfg, seed);

        std::vector<DemoExemplar> exemplars;
        const std::string key = autocot_cache_key(train->samples, k,
                                                  static_cast<std::uint64_t>(seed),
                                                  client.name());
        bool cached = false;
        if (!cfg.cache_dir.empty()) {
            if (auto hit = load_demo_cache(cfg.cache_dir, key)) {
                exemplars = std::move(*hit);
                cached = true;
            }
        }
        if (!cached) {
            AutoCotResult built =
                autocot_build(client, train->samples, k, static_cast<std::uint64_t>(seed),
                              auto_cfg);
            exemplars = std::move(built.exemplars);
            if (notes) {
                notes->insert(notes->end(), built.warnings.begin(), built.warnings.end());
            }
            if (!cfg.cache_dir.empty()) store_demo_cache(cfg.cache_dir, key, exemplars);
        }
        for (const DemoExemplar& e : exemplars) {
            ctx.demos.push_back({e.question, e.reasoning_chain, e.answer});
        }
    } else {
        throw Error(ErrorCode::Config, "unknown method: " + cfg.method);
    }
    return ctx;
}

struct SampleOutcome {
    std::string prompt;
    std::string output;
    FinishReason finish = FinishReason::Stop;
    std::map<std::string, double> values;
    std::vector<std::string> flags;
    std::string plan;  // selfplan only
};

SampleOutcome evaluate_sample(const ExperimentConfig& cfg, LlmClient& client,
                              const MethodContext& ctx, const Sample& sample,
                              const SamplingParams& params) {
    SampleOutcome outcome;
    if (ctx.selfplan) {
        auto [plan, text] = selfplan_run(client, sample, ctx.instruction, params);
        PromptSpec spec;
        spec.instruction = ctx.instruction;
        spec.input_payload = sample.input;
        spec.plan = render_plan(plan);
        outcome.prompt = render_prompt(spec);
        outcome.output = text;
        outcome.plan = render_plan(plan);
        if (plan.degraded) outcome.flags.push_back("plan_degraded");
    } else {
        PromptSpec spec;
        if (ctx.use_compose) {
            spec = compose_ape_cot(cfg.task, ctx.ape_candidate, sample);
        } else {
            spec.instruction = ctx.instruction;
            spec.input_payload = sample.input;
            spec.demonstrations = ctx.demos;
            if (ctx.cot) spec = cot_augment(std::move(spec));
        }
        outcome.prompt = render_prompt(spec);
        const Completion completion = client.complete(outcome.prompt, params);
        outcome.output = completion.text;
        outcome.finish = completion.finish_reason;
    }
    outcome.values = score_sample_output(sample, outcome.output, outcome.flags);
    return outcome;
}

const char* finish_reason_name(FinishReason reason) {
    switch (reason) {
        case FinishReason::Stop: return "stop";
        case FinishReason::Length: return "length";
        case FinishReason::Error: return "error";
    }
    return "stop";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    Dataset test = load_validated(cfg.test_path, Split::Test, cfg.task);
    if (test.samples.empty()) {
        throw Error(ErrorCode::InvalidArgument, cfg.test_path + ": test split is empty");
    }
    if (cfg.sample_cap && static_cast<size_t>(*cfg.sample_cap) < test.samples.size()) {
        test.samples.resize(static_cast<size_t>(*cfg.sample_cap));
    }

    std::optional<Dataset> train, valid;
    if (method_needs_train(cfg.method)) {
        train = load_validated(cfg.train_path, Split::Train, cfg.task);
    }
    if (method_needs_valid(cfg.method)) {
        valid = load_validated(cfg.valid_path, Split::Valid, cfg.task);
    }

    LlmClientPtr client = make_client(cfg);

    ExperimentResult result;
    const std::filesystem::path run_dir = create_run_dir(cfg.out_dir, run_dir_name(cfg));
    result.run_dir = run_dir.string();
    write_text_file(run_dir / "config.txt", serialize_config(cfg));

    JsonlWriter raw_writer(run_dir / "raw_outputs.jsonl");
    JsonlWriter metric_writer(run_dir / "metrics.jsonl");

    for (int run = 0; run < cfg.repeats; ++run) {
        const long seed = cfg.seed + run;
        RunReport report;
        report.run_index = run;
        report.seed = seed;

        std::vector<std::optional<SampleOutcome>> outcomes(test.samples.size());
        try {
            std::vector<std::string> notes;
            const MethodContext ctx = prepare_method(
                cfg, *client, train ? &*train : nullptr, valid ? &*valid : nullptr, seed,
                &notes);
            report.instruction = ctx.instruction;

            const SamplingParams params = run_sampling(cfg, seed);
            parallel_for(test.samples.size(), cfg.provider.max_in_flight, [&](size_t i) {
                outcomes[i] = evaluate_sample(cfg, *client, ctx, test.samples[i], params);
            });
        } catch (const std::exception& e) {
            report.partial = true;
            report.failure = e.what();
            result.complete = false;
        }

        // Persist whatever completed, in dataset order.
        std::map<std::string, double> sums;
        std::map<std::string, int> counts;
        for (size_t i = 0; i < test.samples.size(); ++i) {
            if (!outcomes[i]) continue;
            const Sample& sample = test.samples[i];
            const SampleOutcome& outcome = *outcomes[i];

            json raw;
            raw["run"] = run;
            raw["sample_id"] = sample.id;
            raw["prompt"] = outcome.prompt;
            raw["output"] = outcome.output;
            raw["finish_reason"] = finish_reason_name(outcome.finish);
            if (!outcome.plan.empty()) raw["plan"] = outcome.plan;
            raw_writer.write(raw);

            for (const auto& [metric, value] : outcome.values) {
                json record;
                record["run"] = run;
                record["sample_id"] = sample.id;
                record["metric"] = metric;
                record["value"] = value;
                record["degraded_flags"] = outcome.flags;
                metric_writer.write(record);
                sums[metric] += value;
                counts[metric] += 1;
            }
        }
        for (const auto& [metric, sum] : sums) {
            report.aggregates[metric] = sum / counts[metric];
        }
        result.runs.push_back(std::move(report));
        if (!result.complete) break;  // abort remaining runs after a partial one
    }
    raw_writer.flush();
    metric_writer.flush();

    // Across-run summary over complete runs only.
    std::vector<std::map<std::string, double>> complete_runs;
    for (const RunReport& r : result.runs) {
        if (!r.partial) complete_runs.push_back(r.aggregates);
    }
    if (!complete_runs.empty()) result.summary = aggregate(complete_runs);

    // summary.json: config echo, per-run aggregates, across-run summary.
    json summary;
    summary["task_spec"] = task_spec_json(cfg.task);
    summary["method"] = cfg.method;
    summary["columns"] = task_metric_columns(cfg.task.type);
    summary["complete"] = result.complete;
    summary["runs"] = json::array();
    for (const RunReport& r : result.runs) {
        json run;
        run["run"] = r.run_index;
        run["seed"] = r.seed;
        run["instruction"] = r.instruction;
        run["aggregates"] = r.aggregates;
        run["partial"] = r.partial;
        if (!r.failure.empty()) run["failure"] = r.failure;
        summary["runs"].push_back(std::move(run));
    }
    for (const auto& [metric, stat] : result.summary) {
        summary["metrics"][metric] = summary_to_json(stat);
    }
    write_text_file(run_dir / "summary.json", summary.dump(2) + "\n");

    // Report files in each configured format.
    if (!result.summary.empty()) {
        MethodSummary method_summary;
        method_summary.method = cfg.method;
        method_summary.metrics = result.summary;
        for (const auto& [metric, unused] : result.summary) {
            std::vector<double> values;
            for (const auto& run : complete_runs) values.push_back(run.at(metric));
            method_summary.per_run[metric] = values;
        }
        std::vector<std::string> instructions;
        for (const RunReport& r : result.runs) {
            if (!r.partial && !r.instruction.empty()) instructions.push_back(r.instruction);
        }
        if (!instructions.empty()) {
            method_summary.mean_instruction_tokens =
                count_instruction_tokens(instructions, "whitespace");
        }
        for (const std::string& fmt_name : cfg.report_formats) {
            const ReportFormat fmt = parse_report_format(fmt_name);
            const std::string doc = emit_report(cfg.task, {method_summary}, fmt);
            const char* ext = fmt == ReportFormat::Markdown ? "md"
                              : fmt == ReportFormat::Csv    ? "csv"
                                                            : "json";
            write_text_file(run_dir / (std::string("report.") + ext), doc);
        }
    }
    return result;
}

std::string rebuild_report(const std::string& run_dir, ReportFormat format) {
    const std::filesystem::path dir(run_dir);
    const json summary = json::parse(read_text_file(dir / "summary.json"));
    const TaskKind task = task_from_spec_json(summary.at("task_spec"));
    const std::string method = summary.at("method").get<std::string>();

    // Group persisted per-sample records by run, re-aggregate in file order.
    std::map<int, std::map<std::string, double>> sums;
    std::map<int, std::map<std::string, int>> counts;
    std::set<int> partial_runs;
    for (const json& run : summary.at("runs")) {
        if (run.value("partial", false)) partial_runs.insert(run.at("run").get<int>());
    }
    for (const json& record : read_jsonl(dir / "metrics.jsonl")) {
        const int run = record.at("run").get<int>();
        if (partial_runs.count(run)) continue;
        const std::string metric = record.at("metric").get<std::string>();
        sums[run][metric] += record.at("value").get<double>();
        counts[run][metric] += 1;
    }

    std::vector<std::map<std::string, double>> run_values;
    for (const auto& [run, metric_sums] : sums) {
        std::map<std::string, double> aggregates;
        for (const auto& [metric, sum] : metric_sums) {
            aggregates[metric] = sum / counts[run][metric];
        }
        run_values.push_back(std::move(aggregates));
    }
    if (run_values.empty()) {
        throw Error(ErrorCode::InvalidArgument, run_dir + ": no complete runs to aggregate");
    }

    MethodSummary method_summary;
    method_summary.method = method;
    method_summary.metrics = aggregate(run_values);
    for (const auto& [metric, unused] : method_summary.metrics) {
        std::vector<double> values;
        for (const auto& run : run_values) values.push_back(run.at(metric));
        method_summary.per_run[metric] = values;
    }
    std::vector<std::string> instructions;
    for (const json& run : summary.at("runs")) {
        if (run.value("partial", false)) continue;
        const std::string instruction = run.value("instruction", std::string());
        if (!instruction.empty()) instructions.push_back(instruction);
    }
    if (!instructions.empty()) {
        method_summary.mean_instruction_tokens =
            count_instruction_tokens(instructions, "whitespace");
    }
    return emit_report(task, {method_summary}, format);
}

std::string run_optimize(const ExperimentConfig& cfg, const std::string& out_dir) {
    if (cfg.method != "ape" && cfg.method != "opro") {
        throw Error(ErrorCode::Config, "optimize supports --method ape or opro");
    }

    LlmClientPtr client = make_client(cfg);
    const std::filesystem::path dir = create_run_dir(out_dir, run_dir_name(cfg));
    write_text_file(dir / "config.txt", serialize_config(cfg));

    if (cfg.method == "ape") {
        const Dataset train = load_validated(cfg.train_path, Split::Train, cfg.task);
        const Dataset valid = load_validated(cfg.valid_path, Split::Valid, cfg.task);
        std::vector<CandidateInstruction> candidates;
        const CandidateInstruction best =
            optimize_instruction_ape(cfg, *client, train, valid, cfg.seed, &candidates);

        JsonlWriter writer(dir / "candidates.jsonl");
        for (const CandidateInstruction& c : candidates) {
            writer.write({{"instruction", c.text},
                          {"score", c.score},
                          {"source", std::string(instruction_source_name(c.source))},
                          {"iteration", c.iteration}});
        }
        write_text_file(dir / "best_instruction.txt", best.text + "\n");
        return best.text;
    }

    // OPRO
    const Dataset valid = load_validated(cfg.valid_path, Split::Valid, cfg.task);
    const std::string seed_instruction = cfg.instruction_override.empty()
                                             ? instantiate_basic_prompt(cfg.task)
                                             : cfg.instruction_override;
    auto [best, trajectory] =
        opro_optimize(*client, cfg.task, seed_instruction,
                      make_opro_eval_fn(cfg, *client, valid, cfg.seed), cfg.opro,
                      run_sampling(cfg, cfg.seed), cfg.opro_top_k);

    JsonlWriter writer(dir / "trajectory.jsonl");
    for (const OproStep& step : trajectory.steps) {
        writer.write({{"iteration", step.iteration},
                      {"instruction", step.instruction},
                      {"score", step.score}});
    }
    for (const std::string& warning : trajectory.warnings) {
        writer.write({{"warning", warning}});
    }
    write_text_file(dir / "best_instruction.txt", best.text + "\n");
    if (trajectory.aborted) {
        throw Error(ErrorCode::Partial,
                    "opro aborted (partial trajectory persisted): " + trajectory.abort_reason);
    }
    return best.text;
}

std::string run_compare(const std::string& run_dir_a, const std::string& run_dir_b,
                        ReportFormat format) {
    const auto load = [](const std::string& run_dir) {
        const std::filesystem::path dir(run_dir);
        struct Loaded {
            json summary;
            // metric -> sample id -> mean value across runs
            std::map<std::string, std::map<std::string, double>> per_sample;
        } loaded;
        loaded.summary = json::parse(read_text_file(dir / "summary.json"));
        std::map<std::string, std::map<std::string, std::pair<double, int>>> acc;
        for (const json& record : read_jsonl(dir / "metrics.jsonl")) {
            const std::string metric = record.at("metric").get<std::string>();
            const std::string id = record.at("sample_id").get<std::string>();
            auto& slot = acc[metric][id];
            slot.first += record.at("value").get<double>();
            slot.second += 1;
        }
        for (const auto& [metric, ids] : acc) {
            for (const auto& [id, sum_count] : ids) {
                loaded.per_sample[metric][id] = sum_count.first / sum_count.second;
            }
        }
        return loaded;
    };

    const auto a = load(run_dir_a);
    const auto b = load(run_dir_b);

    if (a.summary.at("task_spec") != b.summary.at("task_spec")) {
        throw Error(ErrorCode::InvalidArgument,
                    "compare: runs have different tasks: " + a.summary.at("task_spec").dump() +
                        " vs " + b.summary.at("task_spec").dump());
    }

    std::vector<MetricComparison> comparisons;
    const TaskKind task = task_from_spec_json(a.summary.at("task_spec"));
    for (const std::string& metric : task_metric_columns(task.type)) {
        auto it_a = a.per_sample.find(metric);
        auto it_b = b.per_sample.find(metric);
        if (it_a == a.per_sample.end() || it_b == b.per_sample.end()) continue;

        // Test sets must align sample-for-sample.
        for (const auto& [id, unused] : it_a->second) {
            if (!it_b->second.count(id)) {
                throw Error(ErrorCode::InvalidArgument,
                            "compare: sample \"" + id + "\" missing from " + run_dir_b);
            }
        }
        for (const auto& [id, unused] : it_b->second) {
            if (!it_a->second.count(id)) {
                throw Error(ErrorCode::InvalidArgument,
                            "compare: sample \"" + id + "\" missing from " + run_dir_a);
            }
        }

        std::vector<double> values_a, values_b;
        for (const auto& [id, value] : it_a->second) {
            values_a.push_back(value);
            values_b.push_back(it_b->second.at(id));
        }

        MetricComparison comparison;
        comparison.metric = metric;
        double sum_a = 0.0, sum_b = 0.0;
        for (double v : values_a) sum_a += v;
        for (double v : values_b) sum_b += v;
        comparison.mean_a = sum_a / static_cast<double>(values_a.size());
        comparison.mean_b = sum_b / static_cast<double>(values_b.size());
        comparison.delta = comparison.mean_b - comparison.mean_a;
        comparison.ttest = paired_t_test(values_b, values_a);
        comparisons.push_back(std::move(comparison));
    }
    if (comparisons.empty()) {
        throw Error(ErrorCode::InvalidArgument, "compare: no shared metrics between runs");
    }

    const std::string label_a = a.summary.at("method").get<std::string>();
    const std::string label_b = b.summary.at("method").get<std::string>();

    // Table-II-shaped companion: mean instruction tokens per method with a
    // signed delta against the first row.
    std::vector<TokenEfficiencyRow> token_rows;
    const auto instruction_tokens = [](const json& summary) -> std::optional<double> {
        std::vector<std::string> instructions;
        for (const json& run : summary.at("runs")) {
            if (run.value("partial", false)) continue;
            const std::string instruction = run.value("instruction", std::string());
            if (!instruction.empty()) instructions.push_back(instruction);
        }
        if (instructions.empty()) return std::nullopt;
        return count_instruction_tokens(instructions, "whitespace");
    };
    const auto tokens_a = instruction_tokens(a.summary);
    const auto tokens_b = instruction_tokens(b.summary);
    if (tokens_a && tokens_b) {
        token_rows.push_back({label_a, *tokens_a});
        token_rows.push_back({label_b, *tokens_b});
    }
    return emit_comparison(label_a, label_b, comparisons, format, token_rows);
}

}  // namespace apg
