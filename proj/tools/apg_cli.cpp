// apg command-line interface. All functionality goes through the C API in
// apg.h; this binary only parses flags, forwards settings and prints
// results. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "apg.h"

namespace {

struct ConfigDeleter {
    void operator()(apg_config* c) const { apg_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<apg_config, ConfigDeleter>;

struct StringDeleter {
    void operator()(char* s) const { apg_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

int fail(apg_status status, const char* what) {
    std::fprintf(stderr, "apg: %s failed (status %d): %s\n", what, static_cast<int>(status),
                 apg_last_error());
    // Bad flags / config values are usage errors; everything else is runtime.
    return status == APG_ERR_CONFIG ? 2 : 1;
}

/// Flag values collected by CLI11, forwarded as config keys when set.
struct CommonFlags {
    std::string config_file;
    std::string mock;
    std::string out_dir = "runs";
    std::string task, lang, source_lang, target_lang;
    std::string method;
    std::string train, valid, test;
    std::string instruction;
    long seed = 0;
    bool seed_set = false;
    int repeats = -1;
    int sample_cap = -1;
    int n_candidates = -1;
    int n_demos = -1;
    int scoring_set_size = -1;
    int max_steps = -1;
    int candidates_per_step = -1;
    int patience = -1;
    int autocot_k = -1;
    int eval_subset_size = -1;
    std::string endpoint, model, api_key_env, cache_dir, formats;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_datasets) {
    cmd->add_option("--config", flags.config_file, "config file (key = value lines)");
    cmd->add_option("--mock", flags.mock, "mock script JSON; replaces the provider");
    cmd->add_option("--out-dir", flags.out_dir, "run directory root")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "base seed (runs derive base+index)")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--task", flags.task, "summarization | translation | api-rec");
    cmd->add_option("--lang", flags.lang, "summarization language (java|python)");
    cmd->add_option("--source-lang", flags.source_lang, "translation source language");
    cmd->add_option("--target-lang", flags.target_lang, "translation target language");
    cmd->add_option("--endpoint", flags.endpoint, "OpenAI-compatible endpoint URL");
    cmd->add_option("--model", flags.model, "model name");
    cmd->add_option("--api-key-env", flags.api_key_env, "env var holding the API key");
    if (with_datasets) {
        cmd->add_option("--train", flags.train, "train split JSONL");
        cmd->add_option("--valid", flags.valid, "validation split JSONL");
        cmd->add_option("--test", flags.test, "test split JSONL");
    }
}

apg_status apply_flags(apg_config* config, const CommonFlags& flags) {
    apg_status status = APG_OK;
    auto set = [&](const char* key, const std::string& value) {
        if (status == APG_OK && !value.empty()) status = apg_config_set(config, key, value.c_str());
    };
    auto set_int = [&](const char* key, int value) {
        if (status == APG_OK && value >= 0) {
            status = apg_config_set(config, key, std::to_string(value).c_str());
        }
    };

    if (!flags.config_file.empty()) {
        status = apg_config_load_file(config, flags.config_file.c_str());
        if (status != APG_OK) return status;
    }
    set("task", flags.task);
    set("lang", flags.lang);
    set("source_lang", flags.source_lang);
    set("target_lang", flags.target_lang);
    set("method", flags.method);
    set("train", flags.train);
    set("valid", flags.valid);
    set("test", flags.test);
    set("mock", flags.mock);
    set("endpoint", flags.endpoint);
    set("model", flags.model);
    set("api_key_env", flags.api_key_env);
    set("instruction", flags.instruction);
    set("cache_dir", flags.cache_dir);
    set("formats", flags.formats);
    if (flags.seed_set) set("seed", std::to_string(flags.seed));
    set_int("repeats", flags.repeats);
    set_int("sample_cap", flags.sample_cap);
    set_int("n_candidates", flags.n_candidates);
    set_int("n_demos", flags.n_demos);
    set_int("scoring_set_size", flags.scoring_set_size);
    set_int("max_steps", flags.max_steps);
    set_int("candidates_per_step", flags.candidates_per_step);
    set_int("patience", flags.patience);
    set_int("autocot_k", flags.autocot_k);
    set_int("eval_subset_size", flags.eval_subset_size);
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"apg: automated prompt generation and evaluation for code models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", apg_version());

    // validate
    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "check a JSONL dataset's invariants");
    validate->add_option("--dataset", validate_path, "dataset JSONL path")->required();

    // optimize
    CommonFlags optimize_flags;
    CLI::App* optimize = app.add_subcommand("optimize", "search for an instruction (ape | opro)");
    add_common_flags(optimize, optimize_flags, true);
    optimize->add_option("--method", optimize_flags.method, "ape | opro")->required();
    optimize->add_option("--n-candidates", optimize_flags.n_candidates, "APE candidate pool size");
    optimize->add_option("--n-demos", optimize_flags.n_demos, "APE demo pairs");
    optimize->add_option("--scoring-set-size", optimize_flags.scoring_set_size,
                         "APE scoring samples from the validation split");
    optimize->add_option("--max-steps", optimize_flags.max_steps, "OPRO optimization rounds");
    optimize->add_option("--candidates-per-step", optimize_flags.candidates_per_step,
                         "OPRO proposals per round");
    optimize->add_option("--patience", optimize_flags.patience,
                         "OPRO rounds without improvement before stopping");
    optimize->add_option("--eval-subset-size", optimize_flags.eval_subset_size,
                         "validation samples for OPRO's metric");
    optimize->add_option("--instruction", optimize_flags.instruction, "OPRO seed instruction");

    // evaluate
    CommonFlags evaluate_flags;
    CLI::App* evaluate = app.add_subcommand("evaluate", "run a method on the test split");
    add_common_flags(evaluate, evaluate_flags, true);
    evaluate
        ->add_option("--method", evaluate_flags.method,
                     "basic | ape | opro | cot | autocot | selfplan | ape_cot")
        ->required();
    evaluate->add_option("--repeats", evaluate_flags.repeats, "independent runs (default 5)");
    evaluate->add_option("--sample-cap", evaluate_flags.sample_cap, "use only the first N samples");
    evaluate->add_option("--instruction", evaluate_flags.instruction,
                         "skip optimization and use this instruction");
    evaluate->add_option("--n-candidates", evaluate_flags.n_candidates, "APE candidate pool size");
    evaluate->add_option("--scoring-set-size", evaluate_flags.scoring_set_size,
                         "APE scoring samples");
    evaluate->add_option("--max-steps", evaluate_flags.max_steps, "OPRO optimization rounds");
    evaluate->add_option("--patience", evaluate_flags.patience, "OPRO stagnation budget");
    evaluate->add_option("--autocot-k", evaluate_flags.autocot_k, "AutoCoT cluster count");
    evaluate->add_option("--eval-subset-size", evaluate_flags.eval_subset_size,
                         "validation samples for OPRO's metric");
    evaluate->add_option("--cache-dir", evaluate_flags.cache_dir, "AutoCoT demo cache directory");
    evaluate->add_option("--formats", evaluate_flags.formats,
                         "report formats, comma separated (markdown,csv,json)");

    // compare
    std::string compare_a, compare_b, compare_format = "markdown";
    CLI::App* compare = app.add_subcommand("compare", "paired comparison of two run directories");
    compare->add_option("run_a", compare_a, "first run directory")->required();
    compare->add_option("run_b", compare_b, "second run directory")->required();
    compare->add_option("--format", compare_format, "markdown | csv | json")
        ->capture_default_str();

    // report
    std::string report_dir, report_format = "markdown";
    CLI::App* report = app.add_subcommand(
        "report", "rebuild a run's report from its per-sample records");
    report->add_option("run_dir", report_dir, "run directory")->required();
    report->add_option("--format", report_format, "markdown | csv | json")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // --help exits 0
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "apg: %s\n", e.what());
        return 2;
    }

    if (validate->parsed()) {
        CString violations;
        char* raw = nullptr;
        const apg_status status = apg_validate_dataset(validate_path.c_str(), &raw);
        violations.reset(raw);
        if (status != APG_OK) return fail(status, "validate");
        const std::string json = violations.get();
        std::printf("%s\n", json.c_str());
        return json == "[]" ? 0 : 1;
    }

    if (optimize->parsed() || evaluate->parsed()) {
        const CommonFlags& flags = optimize->parsed() ? optimize_flags : evaluate_flags;
        ConfigPtr config;
        {
            apg_config* raw = nullptr;
            if (apg_status s = apg_config_create(&raw); s != APG_OK) return fail(s, "config");
            config.reset(raw);
        }
        if (apg_status s = apply_flags(config.get(), flags); s != APG_OK) {
            std::fprintf(stderr, "apg: %s\n", apg_last_error());
            return 2;  // bad flag/config values are usage errors
        }

        if (optimize->parsed()) {
            char* best = nullptr;
            const apg_status status = apg_optimize(config.get(), flags.out_dir.c_str(), &best);
            CString best_owned(best);
            if (status != APG_OK) return fail(status, "optimize");
            std::printf("%s\n", best_owned.get());
            return 0;
        }

        char* run_dir = nullptr;
        const apg_status status = apg_evaluate(config.get(), flags.out_dir.c_str(), &run_dir);
        CString run_dir_owned(run_dir);
        if (run_dir_owned) std::printf("run directory: %s\n", run_dir_owned.get());
        if (status != APG_OK) return fail(status, "evaluate");
        return 0;
    }

    if (compare->parsed()) {
        char* doc = nullptr;
        const apg_status status =
            apg_compare(compare_a.c_str(), compare_b.c_str(), compare_format.c_str(), &doc);
        CString doc_owned(doc);
        if (status != APG_OK) return fail(status, "compare");
        std::printf("%s", doc_owned.get());
        return 0;
    }

    if (report->parsed()) {
        char* doc = nullptr;
        const apg_status status =
            apg_report(report_dir.c_str(), report_format.c_str(), &doc);
        CString doc_owned(doc);
        if (status != APG_OK) return fail(status, "report");
        std::printf("%s", doc_owned.get());
        return 0;
    }

    return 2;
}
