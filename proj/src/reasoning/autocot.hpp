#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "llm/client.hpp"

namespace apg {

/// One clustered demonstration: a representative question with its
/// generated reasoning chain. cluster_id ties it back to its k-means
/// cluster; at most one exemplar per cluster.
struct DemoExemplar {
    std::string question;
    std::string reasoning_chain;
    std::string answer;
    int cluster_id = 0;
};

struct AutoCotConfig {
    int max_question_tokens = 60;  // representative length cap (whitespace tokens)
    int kmeans_max_iters = 100;
    SamplingParams sampling;
};

struct AutoCotResult {
    std::vector<DemoExemplar> exemplars;  // ascending cluster_id
    std::vector<std::string> warnings;    // e.g. empty clusters reduced the demo count
};

/// Clusters the training questions (seeded k-means over embeddings from
/// the client), picks per cluster the question nearest its centroid that
/// fits the length cap (nearest overall when none fits), and generates
/// each reasoning chain by zero-shot CoT. Deterministic given the seed and
/// a deterministic client.
AutoCotResult autocot_build(LlmClient& client, const std::vector<Sample>& train_questions,
                            int k, std::uint64_t seed, const AutoCotConfig& config = {});

/// Demo cache: expensive AutoCoT builds are reusable across experiments.
/// The key covers dataset content, k, seed and model name.
std::string autocot_cache_key(const std::vector<Sample>& train_questions, int k,
                              std::uint64_t seed, const std::string& model_name);
std::optional<std::vector<DemoExemplar>> load_demo_cache(const std::string& cache_dir,
                                                         const std::string& key);
void store_demo_cache(const std::string& cache_dir, const std::string& key,
                      const std::vector<DemoExemplar>& exemplars);

}  // namespace apg
