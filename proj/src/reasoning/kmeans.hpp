#pragma once

#include <cstdint>
#include <vector>

namespace apg {

struct KMeansResult {
    std::vector<int> assignment;                  // point index -> cluster id
    std::vector<std::vector<double>> centroids;   // cluster id -> centroid
    double within_cluster_ss = 0.0;               // final objective
    std::vector<double> wcss_history;             // objective after each accepted iteration
    int iterations = 0;
};

/// Seeded Lloyd k-means with k-means++ initialization, at most max_iters
/// iterations. Deterministic for a fixed seed. Clusters may end up empty;
/// callers decide how to handle that.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iters = 100);

}  // namespace apg
