#include "reasoning/autocot.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "core/error.hpp"
#include "core/prompt.hpp"
#include "core/text.hpp"
#include "llm/embedding.hpp"
#include "reasoning/cot.hpp"
#include "reasoning/kmeans.hpp"

namespace apg {

using nlohmann::json;

namespace {

// Splits a zero-shot CoT completion into (reasoning, answer). An explicit
// "Answer:" marker wins; otherwise the whole text is the chain and the
// caller's fallback answer applies.
std::pair<std::string, std::string> split_chain(const std::string& completion) {
    const size_t marker = completion.rfind("Answer:");
    if (marker != std::string::npos) {
        return {trim(completion.substr(0, marker)), trim(completion.substr(marker + 7))};
    }
    return {trim(completion), ""};
}

std::string fallback_answer(const Sample& sample) {
    if (!sample.references.empty()) return sample.references.front();
    std::string joined;
    for (const std::string& api : sample.truth_apis) {
        if (!joined.empty()) joined += ", ";
        joined += api;
    }
    return joined;
}

}  // namespace

AutoCotResult autocot_build(LlmClient& client, const std::vector<Sample>& train_questions,
                            int k, std::uint64_t seed, const AutoCotConfig& config) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "autocot: k must be positive");
    if (train_questions.size() < static_cast<size_t>(k)) {
        throw Error(ErrorCode::InvalidArgument,
                    "autocot: need at least k training questions (" +
                        std::to_string(train_questions.size()) + " < " + std::to_string(k) + ")");
    }

    std::vector<std::string> questions;
    questions.reserve(train_questions.size());
    for (const Sample& s : train_questions) questions.push_back(s.input);

    const std::vector<std::vector<double>> embeddings = client.embed(questions);
    const KMeansResult clustering =
        kmeans(embeddings, k, seed, config.kmeans_max_iters);

    AutoCotResult result;

    // Representative per cluster: nearest to centroid within the length
    // cap; nearest overall when every member is too long.
    std::map<int, size_t> representative;
    for (int cluster = 0; cluster < k; ++cluster) {
        double best_capped = std::numeric_limits<double>::infinity();
        double best_any = std::numeric_limits<double>::infinity();
        int capped_index = -1, any_index = -1;
        for (size_t i = 0; i < train_questions.size(); ++i) {
            if (clustering.assignment[i] != cluster) continue;
            const double d = squared_distance(embeddings[i],
                                              clustering.centroids[static_cast<size_t>(cluster)]);
            if (d < best_any) {
                best_any = d;
                any_index = static_cast<int>(i);
            }
            const size_t tokens = split_whitespace(train_questions[i].input).size();
            if (tokens <= static_cast<size_t>(config.max_question_tokens) && d < best_capped) {
                best_capped = d;
                capped_index = static_cast<int>(i);
            }
        }
        if (any_index < 0) {
            result.warnings.push_back("cluster " + std::to_string(cluster) +
                                      " is empty; demo count reduced");
            continue;
        }
        representative[cluster] = static_cast<size_t>(capped_index >= 0 ? capped_index : any_index);
    }

    std::vector<std::string> completed;
    for (const auto& [cluster, index] : representative) {
        const Sample& sample = train_questions[index];

        PromptSpec spec;
        spec.instruction = instantiate_basic_prompt(sample.task);
        spec.input_payload = sample.input;
        spec = cot_augment(std::move(spec));

        Completion completion;
        try {
            completion = client.complete(render_prompt(spec), config.sampling);
        } catch (const std::exception& e) {
            std::string done;
            for (const std::string& id : completed) {
                if (!done.empty()) done += ", ";
                done += id;
            }
            throw Error(ErrorCode::Partial,
                        "autocot: chain generation failed for sample \"" + sample.id +
                            "\": " + e.what() + "; completed exemplars: [" + done + "]");
        }

        auto [reasoning, answer] = split_chain(completion.text);
        if (answer.empty()) answer = fallback_answer(sample);
        if (reasoning.empty()) {
            result.warnings.push_back("empty reasoning chain for sample \"" + sample.id + "\"");
            reasoning = "(no reasoning produced)";
        }

        DemoExemplar exemplar;
        exemplar.question = sample.input;
        exemplar.reasoning_chain = reasoning;
        exemplar.answer = answer;
        exemplar.cluster_id = cluster;
        result.exemplars.push_back(std::move(exemplar));
        completed.push_back(sample.id);
    }
    return result;  // map iteration gives ascending cluster_id
}

std::string autocot_cache_key(const std::vector<Sample>& train_questions, int k,
                              std::uint64_t seed, const std::string& model_name) {
    std::string acc;
    for (const Sample& s : train_questions) {
        acc += fnv1a64_hex(s.id);
        acc += fnv1a64_hex(s.input);
    }
    acc += "|k=" + std::to_string(k) + "|seed=" + std::to_string(seed) + "|model=" + model_name;
    return fnv1a64_hex(acc);
}

std::optional<std::vector<DemoExemplar>> load_demo_cache(const std::string& cache_dir,
                                                         const std::string& key) {
    const std::filesystem::path path =
        std::filesystem::path(cache_dir) / ("autocot_" + key + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        json doc = json::parse(in);
        std::vector<DemoExemplar> exemplars;
        for (const json& item : doc.at("exemplars")) {
            DemoExemplar e;
            e.question = item.at("question").get<std::string>();
            e.reasoning_chain = item.at("reasoning").get<std::string>();
            e.answer = item.at("answer").get<std::string>();
            e.cluster_id = item.at("cluster_id").get<int>();
            exemplars.push_back(std::move(e));
        }
        return exemplars;
    } catch (const json::exception&) {
        return std::nullopt;  // stale/corrupt cache entries are ignored
    }
}

void store_demo_cache(const std::string& cache_dir, const std::string& key,
                      const std::vector<DemoExemplar>& exemplars) {
    std::filesystem::create_directories(cache_dir);
    json doc;
    doc["key"] = key;
    doc["exemplars"] = json::array();
    for (const DemoExemplar& e : exemplars) {
        doc["exemplars"].push_back({{"question", e.question},
                                    {"reasoning", e.reasoning_chain},
                                    {"answer", e.answer},
                                    {"cluster_id", e.cluster_id}});
    }
    const std::filesystem::path path =
        std::filesystem::path(cache_dir) / ("autocot_" + key + ".json");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write demo cache: " + path.string());
    out << doc.dump(2) << "\n";
}

}  // namespace apg
