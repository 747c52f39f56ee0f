#ifndef CLUSTERCF_CLUSTER_MODEL_HPP
#define CLUSTERCF_CLUSTER_MODEL_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "clustercf/common.hpp"

namespace clustercf {

/// Label for points no cluster claims (density-based models). Never a
/// valid counterfactual target.
inline constexpr int kNoise = -1;

/// Per-cluster statistics captured at fit time: the reference centroid
/// and the min/max member-to-centroid distance under the model's metric.
struct ClusterSummary {
    int cluster_id = 0;
    std::vector<double> centroid;
    double min_dist = 0.0;
    double max_dist = 0.0;
    std::size_t cardinality = 0;
};

/// A fitted clustering model over an encoded numeric space. Assignment is
/// deterministic after fitting; implementations are immutable and safe to
/// share across threads.
class ClusterModel {
public:
    virtual ~ClusterModel() = default;

    /// Cluster id for an encoded point, or kNoise.
    virtual int assign(const std::vector<double>& x) const = 0;

    virtual int num_clusters() const = 0;
    virtual const std::vector<ClusterSummary>& summaries() const = 0;
    virtual std::string algorithm() const = 0;
    virtual std::string metric() const { return "euclidean"; }

    const ClusterSummary& summary_for(int cluster_id) const {
        for (const auto& s : summaries())
            if (s.cluster_id == cluster_id) return s;
        throw ContractError("no summary for cluster " + std::to_string(cluster_id));
    }
};

/// Per-cluster reference point plus min/max member-to-reference distances
/// for the given assignment of `data`. The reference is the model's own
/// centroid when `centroids` is supplied (k-means), otherwise the member
/// mean (density models keep no centroid). Empty clusters are skipped and
/// reported in `warnings` when provided.
inline std::vector<ClusterSummary> compute_summaries(
    const std::vector<std::vector<double>>& data, const std::vector<int>& labels,
    int num_clusters, const std::vector<std::vector<double>>* centroids = nullptr,
    std::vector<std::string>* warnings = nullptr) {
    std::vector<ClusterSummary> out;
    for (int c = 0; c < num_clusters; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) members.push_back(i);
        if (members.empty()) {
            if (warnings)
                warnings->push_back("cluster " + std::to_string(c) + " is empty; summary skipped");
            continue;
        }
        ClusterSummary s;
        s.cluster_id = c;
        s.cardinality = members.size();
        if (centroids) {
            s.centroid = (*centroids)[static_cast<std::size_t>(c)];
        } else {
            s.centroid.assign(data[members[0]].size(), 0.0);
            for (std::size_t i : members)
                for (std::size_t j = 0; j < s.centroid.size(); ++j) s.centroid[j] += data[i][j];
            for (double& v : s.centroid) v /= static_cast<double>(members.size());
        }
        s.min_dist = std::numeric_limits<double>::infinity();
        s.max_dist = 0.0;
        for (std::size_t i : members) {
            const double d = euclidean(data[i], s.centroid);
            s.min_dist = std::min(s.min_dist, d);
            s.max_dist = std::max(s.max_dist, d);
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace clustercf

#endif
