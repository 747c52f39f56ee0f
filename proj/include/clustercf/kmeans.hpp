#ifndef CLUSTERCF_KMEANS_HPP
#define CLUSTERCF_KMEANS_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "clustercf/cluster_model.hpp"
#include "clustercf/common.hpp"

namespace clustercf {

struct KMeansOptions {
    int max_iterations = 300;
    double tolerance = 1e-6; // max centroid shift between iterations
    int restarts = 10;       // independent seeded inits; best inertia kept
};

class KMeansModel final : public ClusterModel {
public:
    KMeansModel() = default;

    int assign(const std::vector<double>& x) const override {
        if (x.size() != centroids_[0].size())
            throw ContractError("kmeans assign: dimension mismatch");
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < static_cast<int>(centroids_.size()); ++c) {
            const double d = squared_euclidean(x, centroids_[static_cast<std::size_t>(c)]);
            if (d < best_d) { // ties keep the lowest id
                best_d = d;
                best = c;
            }
        }
        return best;
    }

    int num_clusters() const override { return static_cast<int>(centroids_.size()); }
    const std::vector<ClusterSummary>& summaries() const override { return summaries_; }
    std::string algorithm() const override { return "kmeans"; }

    const std::vector<std::vector<double>>& centroids() const { return centroids_; }
    double inertia() const { return inertia_; }
    std::uint64_t seed() const { return seed_; }

    friend KMeansModel kmeans_fit(const std::vector<std::vector<double>>& data, int k,
                                  std::uint64_t seed, const KMeansOptions& options);
    friend struct KMeansModelAccess;

private:
    std::vector<std::vector<double>> centroids_;
    std::vector<ClusterSummary> summaries_;
    double inertia_ = 0.0;
    std::uint64_t seed_ = 0;
};

// model_io needs to reassemble a fitted model from serialized state.
struct KMeansModelAccess {
    static KMeansModel make(std::vector<std::vector<double>> centroids,
                            std::vector<ClusterSummary> summaries, double inertia,
                            std::uint64_t seed) {
        KMeansModel m;
        m.centroids_ = std::move(centroids);
        m.summaries_ = std::move(summaries);
        m.inertia_ = inertia;
        m.seed_ = seed;
        return m;
    }
};

namespace detail {

inline std::vector<std::vector<double>> kmeanspp_init(const std::vector<std::vector<double>>& data,
                                                      int k, Rng& rng) {
    const std::size_t n = data.size();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    centroids.push_back(data[rng.below(n)]);
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& ctr : centroids)
                best = std::min(best, squared_euclidean(data[i], ctr));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total <= 0.0) {
            pick = rng.below(n); // all points coincide with a centroid
        } else {
            const double u = rng.uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(data[pick]);
    }
    return centroids;
}

struct LloydResult {
    std::vector<std::vector<double>> centroids;
    std::vector<int> labels;
    double inertia = 0.0;
};

inline LloydResult lloyd(const std::vector<std::vector<double>>& data,
                         std::vector<std::vector<double>> centroids,
                         const KMeansOptions& options) {
    const std::size_t n = data.size();
    const std::size_t dim = data[0].size();
    const int k = static_cast<int>(centroids.size());
    std::vector<int> labels(n, 0);
    double inertia = 0.0;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = squared_euclidean(data[i], centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            labels[i] = best;
            inertia += best_d;
        }
        std::vector<std::vector<double>> next(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& ctr = next[static_cast<std::size_t>(labels[i])];
            for (std::size_t j = 0; j < dim; ++j) ctr[j] += data[i][j];
            ++counts[static_cast<std::size_t>(labels[i])];
        }
        for (int c = 0; c < k; ++c) {
            auto& ctr = next[static_cast<std::size_t>(c)];
            if (counts[static_cast<std::size_t>(c)] == 0) {
                // reseed an emptied cluster at the point farthest from its centroid
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = squared_euclidean(
                        data[i], centroids[static_cast<std::size_t>(labels[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                ctr = data[far];
                labels[far] = c;
            } else {
                for (std::size_t j = 0; j < dim; ++j)
                    ctr[j] /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
            }
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c)
            shift = std::max(shift, euclidean(centroids[static_cast<std::size_t>(c)],
                                              next[static_cast<std::size_t>(c)]));
        centroids = std::move(next);
        if (shift < options.tolerance) break;
    }
    // final E step so labels and inertia match the returned centroids
    inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            const double d = squared_euclidean(data[i], centroids[static_cast<std::size_t>(c)]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        labels[i] = best;
        inertia += best_d;
    }
    return {std::move(centroids), std::move(labels), inertia};
}

} // namespace detail

/// k-means++ (D²-weighted seeding) followed by Lloyd iterations until the
/// centroid shift drops below tolerance or the iteration cap is hit. Runs
/// `restarts` independent inits and keeps the lowest-inertia solution.
inline KMeansModel kmeans_fit(const std::vector<std::vector<double>>& data, int k,
                              std::uint64_t seed, const KMeansOptions& options = {}) {
    if (k < 1) throw ContractError("kmeans_fit: k must be >= 1");
    if (data.empty() || static_cast<std::size_t>(k) > data.size())
        throw ContractError("kmeans_fit: k exceeds the number of points");

    Rng rng(seed);
    detail::LloydResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    const int restarts = std::max(1, options.restarts);
    for (int r = 0; r < restarts; ++r) {
        Rng init_rng = rng.fork();
        auto result = detail::lloyd(data, detail::kmeanspp_init(data, k, init_rng), options);
        if (result.inertia < best.inertia) best = std::move(result);
    }

    KMeansModel model;
    model.centroids_ = best.centroids;
    model.inertia_ = best.inertia;
    model.seed_ = seed;
    model.summaries_ = compute_summaries(data, best.labels, k, &best.centroids);
    return model;
}

} // namespace clustercf

#endif
