#ifndef CLUSTERCF_DBSCAN_HPP
#define CLUSTERCF_DBSCAN_HPP

#include <cstdint>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "clustercf/cluster_model.hpp"
#include "clustercf/common.hpp"

namespace clustercf {

class DbscanModel final : public ClusterModel {
public:
    DbscanModel() = default;

    /// Nearest core sample within eps decides membership; everything else
    /// is NOISE. Ties go to the lowest cluster id.
    int assign(const std::vector<double>& x) const override {
        if (!core_samples_.empty() && x.size() != core_samples_[0].size())
            throw ContractError("dbscan assign: dimension mismatch");
        int best = kNoise;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < core_samples_.size(); ++i) {
            const double d = euclidean(x, core_samples_[i]);
            if (d > eps_) continue;
            if (d < best_d || (d == best_d && core_labels_[i] < best)) {
                best_d = d;
                best = core_labels_[i];
            }
        }
        return best;
    }

    int num_clusters() const override { return num_clusters_; }
    const std::vector<ClusterSummary>& summaries() const override { return summaries_; }
    std::string algorithm() const override { return "dbscan"; }

    double eps() const { return eps_; }
    int min_pts() const { return min_pts_; }
    const std::vector<std::vector<double>>& core_samples() const { return core_samples_; }
    const std::vector<int>& core_labels() const { return core_labels_; }
    /// Training-point labels in input order (cluster id or kNoise).
    const std::vector<int>& labels() const { return labels_; }

    friend DbscanModel dbscan_fit(const std::vector<std::vector<double>>& data, double eps,
                                  int min_pts, std::vector<std::string>* warnings);
    friend struct DbscanModelAccess;

private:
    double eps_ = 0.0;
    int min_pts_ = 0;
    int num_clusters_ = 0;
    std::vector<std::vector<double>> core_samples_;
    std::vector<int> core_labels_;
    std::vector<int> labels_;
    std::vector<ClusterSummary> summaries_;
};

struct DbscanModelAccess {
    static DbscanModel make(double eps, int min_pts, int num_clusters,
                            std::vector<std::vector<double>> core_samples,
                            std::vector<int> core_labels, std::vector<int> labels,
                            std::vector<ClusterSummary> summaries) {
        DbscanModel m;
        m.eps_ = eps;
        m.min_pts_ = min_pts;
        m.num_clusters_ = num_clusters;
        m.core_samples_ = std::move(core_samples);
        m.core_labels_ = std::move(core_labels);
        m.labels_ = std::move(labels);
        m.summaries_ = std::move(summaries);
        return m;
    }
};

/// Classical density-based clustering: eps-neighbourhood expansion from
/// core points (neighbourhood counts include the point itself). The scan
/// order is the input order, so the labelling is deterministic.
inline DbscanModel dbscan_fit(const std::vector<std::vector<double>>& data, double eps,
                              int min_pts, std::vector<std::string>* warnings = nullptr) {
    if (eps <= 0.0) throw ContractError("dbscan_fit: eps must be positive");
    if (min_pts < 1) throw ContractError("dbscan_fit: min_pts must be >= 1");

    const std::size_t n = data.size();
    constexpr int kUnvisited = -2;
    std::vector<int> labels(n, kUnvisited);
    std::vector<std::vector<std::size_t>> neighbors(n);
    std::vector<bool> is_core(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (euclidean(data[i], data[j]) <= eps) neighbors[i].push_back(j);
        is_core[i] = neighbors[i].size() >= static_cast<std::size_t>(min_pts);
    }

    int next_cluster = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited || !is_core[i]) continue;
        const int cluster = next_cluster++;
        std::deque<std::size_t> frontier{i};
        labels[i] = cluster;
        while (!frontier.empty()) {
            const std::size_t p = frontier.front();
            frontier.pop_front();
            if (!is_core[p]) continue;
            for (std::size_t q : neighbors[p]) {
                if (labels[q] == kUnvisited || labels[q] == kNoise) {
                    const bool fresh = labels[q] == kUnvisited;
                    labels[q] = cluster;
                    if (fresh && is_core[q]) frontier.push_back(q);
                }
            }
        }
    }
    for (auto& l : labels)
        if (l == kUnvisited) l = kNoise;

    DbscanModel model;
    model.eps_ = eps;
    model.min_pts_ = min_pts;
    model.num_clusters_ = next_cluster;
    model.labels_ = labels;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_core[i]) {
            model.core_samples_.push_back(data[i]);
            model.core_labels_.push_back(labels[i]);
        }
    }
    model.summaries_ = compute_summaries(data, labels, next_cluster, nullptr, warnings);
    return model;
}

} // namespace clustercf

#endif
