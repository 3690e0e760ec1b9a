#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "instructgen/ape.hpp"
#include "instructgen/opro.hpp"
#include "llm/types.hpp"

namespace apg {

/// Ordered key=value settings; the config file format plus any overrides
/// laid on top. Lines are `key = value`, '#' starts a comment.
class KvConfig {
public:
    void load_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return values_; }
    std::string snapshot() const;  // re-serialized key = value lines

private:
    std::map<std::string, std::string> values_;
};

inline const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {
        "basic", "ape", "opro", "cot", "autocot", "selfplan", "ape_cot",
    };
    return names;
}

struct ExperimentConfig {
    TaskKind task;
    std::string method = "basic";
    std::string train_path;
    std::string valid_path;
    std::string test_path;
    int repeats = 5;
    std::optional<int> sample_cap;
    long seed = 0;
    SamplingParams sampling;
    bool sampling_max_tokens_set = false;  // else per-task default applies
    ProviderConfig provider;
    std::string mock_script;  // non-empty selects the scripted backend

    ApeConfig ape;
    OproBudget opro;
    int opro_top_k = 8;
    int autocot_k = 8;
    int eval_subset_size = 50;  // validation subset for OPRO's eval_fn
    std::string instruction_override;

    std::string out_dir = "runs";
    std::string cache_dir;  // AutoCoT demo cache; empty disables caching
    std::vector<std::string> report_formats = {"markdown", "csv", "json"};
};

/// Builds and validates an ExperimentConfig from key=value settings.
/// Unknown keys and malformed values are configuration errors.
ExperimentConfig build_experiment_config(const KvConfig& kv);

/// True when `method` needs the train/valid splits (optimizers, AutoCoT).
bool method_needs_train(const std::string& method);
bool method_needs_valid(const std::string& method);

}  // namespace apg
