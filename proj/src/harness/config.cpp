#include "harness/config.hpp"

#include <algorithm>
#include <fstream>

#include "core/error.hpp"
#include "core/text.hpp"

namespace apg {

void KvConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config file: " + path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Config, path + ":" + std::to_string(line_no) +
                                               ": expected key = value");
        }
        set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
}

void KvConfig::set(const std::string& key, const std::string& value) {
    if (key.empty()) throw Error(ErrorCode::Config, "empty config key");
    values_[key] = value;
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string KvConfig::snapshot() const {
    std::string out;
    for (const auto& [key, value] : values_) out += key + " = " + value + "\n";
    return out;
}

namespace {

int parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Config, "config key \"" + key + "\": not an integer: " + value);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Config, "config key \"" + key + "\": not an integer: " + value);
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Config, "config key \"" + key + "\": not a number: " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    const std::string v = to_lower(value);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw Error(ErrorCode::Config, "config key \"" + key + "\": not a boolean: " + value);
}

}  // namespace

bool method_needs_train(const std::string& method) {
    return method == "ape" || method == "ape_cot" || method == "autocot";
}

bool method_needs_valid(const std::string& method) {
    return method == "ape" || method == "ape_cot" || method == "opro";
}

ExperimentConfig build_experiment_config(const KvConfig& kv) {
    ExperimentConfig cfg;

    // Task is assembled from task / lang / source_lang / target_lang.
    const auto task_name = kv.get("task");
    if (!task_name) throw Error(ErrorCode::Config, "missing required config key: task");
    const TaskType type = parse_task_type(*task_name);
    switch (type) {
        case TaskType::CodeSummarization: {
            const auto lang = kv.get("lang");
            if (!lang) throw Error(ErrorCode::Config, "summarization requires config key: lang");
            cfg.task = TaskKind::summarization(parse_lang(*lang));
            break;
        }
        case TaskType::CodeTranslation: {
            const auto source = kv.get("source_lang");
            const auto target = kv.get("target_lang");
            if (!source || !target) {
                throw Error(ErrorCode::Config,
                            "translation requires config keys: source_lang, target_lang");
            }
            cfg.task = TaskKind::translation(parse_lang(*source), parse_lang(*target));
            break;
        }
        case TaskType::ApiRecommendation: cfg.task = TaskKind::api_recommendation(); break;
    }

    cfg.sampling = SamplingParams::defaults_for(cfg.task.type);

    for (const auto& [key, value] : kv.entries()) {
        if (key == "task" || key == "lang" || key == "source_lang" || key == "target_lang") {
            continue;  // consumed above
        } else if (key == "method") {
            if (std::find(method_names().begin(), method_names().end(), value) ==
                method_names().end()) {
                throw Error(ErrorCode::Config, "unknown method: \"" + value + "\"");
            }
            cfg.method = value;
        } else if (key == "train") {
            cfg.train_path = value;
        } else if (key == "valid") {
            cfg.valid_path = value;
        } else if (key == "test") {
            cfg.test_path = value;
        } else if (key == "repeats") {
            cfg.repeats = parse_int(key, value);
            if (cfg.repeats < 1) throw Error(ErrorCode::Config, "repeats must be >= 1");
        } else if (key == "sample_cap") {
            cfg.sample_cap = parse_int(key, value);
            if (*cfg.sample_cap < 1) throw Error(ErrorCode::Config, "sample_cap must be >= 1");
        } else if (key == "seed") {
            cfg.seed = parse_long(key, value);
        } else if (key == "temperature") {
            cfg.sampling.temperature = parse_double(key, value);
            if (cfg.sampling.temperature < 0) {
                throw Error(ErrorCode::Config, "temperature must be >= 0");
            }
        } else if (key == "top_p") {
            cfg.sampling.top_p = parse_double(key, value);
            if (cfg.sampling.top_p <= 0 || cfg.sampling.top_p > 1) {
                throw Error(ErrorCode::Config, "top_p must be in (0, 1]");
            }
        } else if (key == "max_tokens") {
            cfg.sampling.max_tokens = parse_int(key, value);
            if (cfg.sampling.max_tokens < 1) {
                throw Error(ErrorCode::Config, "max_tokens must be >= 1");
            }
            cfg.sampling_max_tokens_set = true;
        } else if (key == "endpoint") {
            cfg.provider.endpoint_url = value;
        } else if (key == "model") {
            cfg.provider.model_name = value;
        } else if (key == "api_key_env") {
            cfg.provider.api_key_env = value;
        } else if (key == "timeout_ms") {
            cfg.provider.request_timeout = std::chrono::milliseconds(parse_long(key, value));
        } else if (key == "max_retries") {
            cfg.provider.max_retries = parse_int(key, value);
            if (cfg.provider.max_retries < 0) {
                throw Error(ErrorCode::Config, "max_retries must be >= 0");
            }
        } else if (key == "max_in_flight") {
            cfg.provider.max_in_flight = parse_int(key, value);
            if (cfg.provider.max_in_flight < 1) {
                throw Error(ErrorCode::Config, "max_in_flight must be >= 1");
            }
        } else if (key == "embedding_model") {
            cfg.provider.embedding_model = value;
        } else if (key == "mock") {
            cfg.mock_script = value;
        } else if (key == "n_candidates") {
            cfg.ape.n_candidates = parse_int(key, value);
            if (cfg.ape.n_candidates < 1) {
                throw Error(ErrorCode::Config, "n_candidates must be >= 1");
            }
        } else if (key == "n_demos") {
            cfg.ape.n_demos = parse_int(key, value);
            if (cfg.ape.n_demos < 0) throw Error(ErrorCode::Config, "n_demos must be >= 0");
        } else if (key == "scoring_set_size") {
            cfg.ape.scoring_set_size = parse_int(key, value);
            if (cfg.ape.scoring_set_size < 1) {
                throw Error(ErrorCode::Config, "scoring_set_size must be >= 1");
            }
        } else if (key == "score_aggregate") {
            const std::string v = to_lower(value);
            if (v == "mean") cfg.ape.aggregate = LogprobAggregate::Mean;
            else if (v == "sum") cfg.ape.aggregate = LogprobAggregate::Sum;
            else throw Error(ErrorCode::Config, "score_aggregate must be mean or sum");
        } else if (key == "use_all_references") {
            cfg.ape.use_all_references = parse_bool(key, value);
        } else if (key == "max_steps") {
            cfg.opro.max_steps = parse_int(key, value);
            if (cfg.opro.max_steps < 0) throw Error(ErrorCode::Config, "max_steps must be >= 0");
        } else if (key == "candidates_per_step") {
            cfg.opro.candidates_per_step = parse_int(key, value);
            if (cfg.opro.candidates_per_step < 1) {
                throw Error(ErrorCode::Config, "candidates_per_step must be >= 1");
            }
        } else if (key == "patience") {
            cfg.opro.patience = parse_int(key, value);
            if (cfg.opro.patience < 1) throw Error(ErrorCode::Config, "patience must be >= 1");
        } else if (key == "meta_prompt_top_k") {
            cfg.opro_top_k = parse_int(key, value);
            if (cfg.opro_top_k < 1) {
                throw Error(ErrorCode::Config, "meta_prompt_top_k must be >= 1");
            }
        } else if (key == "autocot_k") {
            cfg.autocot_k = parse_int(key, value);
            if (cfg.autocot_k < 1) throw Error(ErrorCode::Config, "autocot_k must be >= 1");
        } else if (key == "eval_subset_size") {
            cfg.eval_subset_size = parse_int(key, value);
            if (cfg.eval_subset_size < 1) {
                throw Error(ErrorCode::Config, "eval_subset_size must be >= 1");
            }
        } else if (key == "instruction") {
            cfg.instruction_override = value;
        } else if (key == "out_dir") {
            cfg.out_dir = value;
        } else if (key == "cache_dir") {
            cfg.cache_dir = value;
        } else if (key == "formats") {
            cfg.report_formats.clear();
            std::string current;
            for (char c : value + ",") {
                if (c == ',') {
                    const std::string fmt = trim(current);
                    if (!fmt.empty()) cfg.report_formats.push_back(fmt);
                    current.clear();
                } else {
                    current += c;
                }
            }
            if (cfg.report_formats.empty()) {
                throw Error(ErrorCode::Config, "formats must name at least one format");
            }
        } else {
            throw Error(ErrorCode::Config, "unknown config key: \"" + key + "\"");
        }
    }

    return cfg;
}

}  // namespace apg
