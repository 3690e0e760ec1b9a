#include "reasoning/kmeans.hpp"

#include <limits>
#include <random>

#include "core/error.hpp"
#include "llm/embedding.hpp"

namespace apg {

namespace {

int nearest_centroid(const std::vector<double>& point,
                     const std::vector<std::vector<double>>& centroids) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(point, centroids[c]);
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

double objective(const std::vector<std::vector<double>>& points,
                 const std::vector<int>& assignment,
                 const std::vector<std::vector<double>>& centroids) {
    double total = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        total += squared_distance(points[i], centroids[static_cast<size_t>(assignment[i])]);
    }
    return total;
}

// k-means++ seeding: first centroid uniform, the rest D^2-weighted.
std::vector<std::vector<double>> plus_plus_init(const std::vector<std::vector<double>>& points,
                                                int k, std::mt19937_64& rng) {
    std::vector<std::vector<double>> centroids;
    centroids.push_back(points[rng() % points.size()]);

    std::vector<double> dist2(points.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, squared_distance(points[i], c));
            dist2[i] = best;
            total += best;
        }
        size_t chosen = 0;
        if (total > 0.0) {
            // Deterministic uniform draw in [0, total) from the raw 64-bit
            // stream; avoids distribution implementation differences.
            const double u =
                static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0) * total;
            double acc = 0.0;
            chosen = points.size() - 1;
            for (size_t i = 0; i < points.size(); ++i) {
                acc += dist2[i];
                if (u < acc) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng() % points.size();
        }
        centroids.push_back(points[chosen]);
    }
    return centroids;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k, std::uint64_t seed,
                    int max_iters) {
    if (points.empty()) throw Error(ErrorCode::InvalidArgument, "kmeans: no points");
    if (k < 1 || static_cast<size_t>(k) > points.size()) {
        throw Error(ErrorCode::InvalidArgument, "kmeans: k must be in [1, point count]");
    }

    std::mt19937_64 rng(seed);
    KMeansResult result;
    result.centroids = plus_plus_init(points, k, rng);
    result.assignment.assign(points.size(), 0);

    const size_t dim = points.front().size();
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (size_t i = 0; i < points.size(); ++i) {
            const int c = nearest_centroid(points[i], result.centroids);
            if (c != result.assignment[i]) {
                result.assignment[i] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        // Recompute centroids; empty clusters keep their previous position.
        std::vector<std::vector<double>> sums(static_cast<size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<int> counts(static_cast<size_t>(k), 0);
        for (size_t i = 0; i < points.size(); ++i) {
            const auto c = static_cast<size_t>(result.assignment[i]);
            for (size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
            ++counts[c];
        }
        for (size_t c = 0; c < static_cast<size_t>(k); ++c) {
            if (counts[c] == 0) continue;
            for (size_t d = 0; d < dim; ++d) {
                result.centroids[c][d] = sums[c][d] / counts[c];
            }
        }

        result.iterations = iter + 1;
        result.wcss_history.push_back(objective(points, result.assignment, result.centroids));
        if (!changed) break;
    }

    result.within_cluster_ss = objective(points, result.assignment, result.centroids);
    return result;
}

}  // namespace apg
