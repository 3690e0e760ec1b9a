#include "apg.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "harness/config.hpp"
#include "harness/experiment.hpp"
#include "metrics/codebleu.hpp"

namespace {

thread_local std::string g_last_error;

apg_status status_from(apg::ErrorCode code) {
    using apg::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return APG_ERR_INVALID_ARGUMENT;
        case ErrorCode::Config: return APG_ERR_CONFIG;
        case ErrorCode::Io: return APG_ERR_IO;
        case ErrorCode::Transport: return APG_ERR_TRANSPORT;
        case ErrorCode::Provider: return APG_ERR_PROVIDER;
        case ErrorCode::Capability: return APG_ERR_CAPABILITY;
        case ErrorCode::Optimization: return APG_ERR_OPTIMIZATION;
        case ErrorCode::Partial: return APG_ERR_PARTIAL;
        case ErrorCode::Internal: return APG_ERR_INTERNAL;
    }
    return APG_ERR_INTERNAL;
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

/// Runs fn, translating exceptions into status codes + last-error text.
template <typename Fn>
apg_status guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return APG_OK;
    } catch (const apg::Error& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return APG_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return APG_ERR_INTERNAL;
    }
}

apg_status require(bool condition, const char* message) {
    if (condition) return APG_OK;
    g_last_error = message;
    return APG_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct apg_config {
    apg::KvConfig kv;
};

extern "C" {

const char* apg_version(void) { return "0.1.0"; }

const char* apg_last_error(void) { return g_last_error.c_str(); }

void apg_string_free(char* s) { std::free(s); }

apg_status apg_config_create(apg_config** out) {
    if (apg_status s = require(out != nullptr, "out must not be NULL"); s != APG_OK) return s;
    return guarded([&] { *out = new apg_config(); });
}

void apg_config_destroy(apg_config* config) { delete config; }

apg_status apg_config_load_file(apg_config* config, const char* path) {
    if (apg_status s = require(config != nullptr && path != nullptr,
                               "config and path must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] { config->kv.load_file(path); });
}

apg_status apg_config_set(apg_config* config, const char* key, const char* value) {
    if (apg_status s = require(config != nullptr && key != nullptr && value != nullptr,
                               "config, key and value must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] { config->kv.set(key, value); });
}

apg_status apg_config_get(const apg_config* config, const char* key, char** value_out) {
    if (apg_status s = require(config != nullptr && key != nullptr && value_out != nullptr,
                               "config, key and value_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const auto value = config->kv.get(key);
        if (!value) throw apg::Error(apg::ErrorCode::Config, std::string("unset key: ") + key);
        *value_out = copy_string(*value);
    });
}

apg_status apg_validate_dataset(const char* jsonl_path, char** violations_json_out) {
    if (apg_status s = require(jsonl_path != nullptr && violations_json_out != nullptr,
                               "jsonl_path and violations_json_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const apg::Dataset dataset = apg::load_dataset_jsonl(jsonl_path, apg::Split::Test);
        nlohmann::json violations = nlohmann::json::array();
        for (const std::string& v : apg::validate_dataset(dataset)) violations.push_back(v);
        *violations_json_out = copy_string(violations.dump());
    });
}

apg_status apg_optimize(const apg_config* config, const char* out_dir,
                        char** best_instruction_out) {
    if (apg_status s = require(config != nullptr && out_dir != nullptr &&
                                   best_instruction_out != nullptr,
                               "config, out_dir and best_instruction_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const apg::ExperimentConfig cfg = apg::build_experiment_config(config->kv);
        *best_instruction_out = copy_string(apg::run_optimize(cfg, out_dir));
    });
}

apg_status apg_evaluate(const apg_config* config, const char* out_dir, char** run_dir_out) {
    if (apg_status s = require(config != nullptr && out_dir != nullptr,
                               "config and out_dir must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        apg::ExperimentConfig cfg = apg::build_experiment_config(config->kv);
        cfg.out_dir = out_dir;
        const apg::ExperimentResult result = apg::run_experiment(cfg);
        if (run_dir_out != nullptr) *run_dir_out = copy_string(result.run_dir);
        if (!result.complete) {
            throw apg::Error(apg::ErrorCode::Partial,
                             "one or more runs were partial; completed samples retained in " +
                                 result.run_dir);
        }
    });
}

apg_status apg_compare(const char* run_dir_a, const char* run_dir_b, const char* format,
                       char** document_out) {
    if (apg_status s = require(run_dir_a != nullptr && run_dir_b != nullptr &&
                                   document_out != nullptr,
                               "run_dir_a, run_dir_b and document_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const apg::ReportFormat fmt =
            apg::parse_report_format(format != nullptr ? format : "markdown");
        *document_out = copy_string(apg::run_compare(run_dir_a, run_dir_b, fmt));
    });
}

apg_status apg_report(const char* run_dir, const char* format, char** document_out) {
    if (apg_status s = require(run_dir != nullptr && document_out != nullptr,
                               "run_dir and document_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const apg::ReportFormat fmt =
            apg::parse_report_format(format != nullptr ? format : "markdown");
        *document_out = copy_string(apg::rebuild_report(run_dir, fmt));
    });
}

apg_status apg_codebleu(const char* candidate, const char* reference, const char* language,
                        double* value_out) {
    if (apg_status s = require(candidate != nullptr && reference != nullptr &&
                                   language != nullptr && value_out != nullptr,
                               "candidate, reference, language and value_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const apg::Lang lang = apg::parse_lang(language);
        *value_out = apg::metrics::codebleu(candidate, reference, lang).value;
    });
}

apg_status apg_basic_prompt(const char* task, const char* lang, const char* source_lang,
                            const char* target_lang, char** prompt_out) {
    if (apg_status s = require(task != nullptr && prompt_out != nullptr,
                               "task and prompt_out must not be NULL");
        s != APG_OK) {
        return s;
    }
    return guarded([&] {
        const apg::TaskType type = apg::parse_task_type(task);
        apg::TaskKind kind;
        switch (type) {
            case apg::TaskType::CodeSummarization:
                if (lang == nullptr) {
                    throw apg::Error(apg::ErrorCode::Config, "summarization requires lang");
                }
                kind = apg::TaskKind::summarization(apg::parse_lang(lang));
                break;
            case apg::TaskType::CodeTranslation:
                if (source_lang == nullptr || target_lang == nullptr) {
                    throw apg::Error(apg::ErrorCode::Config,
                                     "translation requires source_lang and target_lang");
                }
                kind = apg::TaskKind::translation(apg::parse_lang(source_lang),
                                                  apg::parse_lang(target_lang));
                break;
            case apg::TaskType::ApiRecommendation:
                kind = apg::TaskKind::api_recommendation();
                break;
        }
        *prompt_out = copy_string(apg::instantiate_basic_prompt(kind));
    });
}

}  // extern "C"
