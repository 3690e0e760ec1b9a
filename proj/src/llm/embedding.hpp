#pragma once

#include <string>
#include <vector>

namespace apg {

inline constexpr int kFallbackEmbeddingDim = 256;

/// Local deterministic embedder: hashed bag-of-words term frequencies,
/// 256 dimensions, L2-normalized. Texts with disjoint vocabulary embed to
/// (near-)orthogonal vectors, which is exactly what clustering needs when
/// no provider embedding is configured. Never fails.
std::vector<double> fallback_embed_one(const std::string& text);
std::vector<std::vector<double>> fallback_embed(const std::vector<std::string>& texts);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);
double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace apg
