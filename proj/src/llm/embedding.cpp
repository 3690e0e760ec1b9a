#include "llm/embedding.hpp"

#include <cmath>

#include "core/text.hpp"

namespace apg {

std::vector<double> fallback_embed_one(const std::string& text) {
    std::vector<double> v(kFallbackEmbeddingDim, 0.0);
    for (const std::string& token : split_whitespace(to_lower(text))) {
        v[fnv1a64(token) % kFallbackEmbeddingDim] += 1.0;
    }
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : v) x *= inv;
    }
    return v;
}

std::vector<std::vector<double>> fallback_embed(const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(fallback_embed_one(t));
    return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

}  // namespace apg
