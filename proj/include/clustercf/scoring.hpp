#ifndef CLUSTERCF_SCORING_HPP
#define CLUSTERCF_SCORING_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "clustercf/cluster_model.hpp"
#include "clustercf/gower.hpp"
#include "clustercf/model_io.hpp"
#include "clustercf/schema.hpp"

namespace clustercf {

/// The three multiplicative components of the counterfactual objective.
/// All live in [0, 1]; the total is their exact product.
struct ScoreBreakdown {
    double s_f = 0.0;
    double s_x = 0.0;
    double s_y = 0.0;
    double total = 0.0;
};

/// Proportion of features left untouched. Candidates copy unchanged
/// features bit-for-bit, so exact comparison (with a 1e-12 slack for
/// values that went through inverse scaling) never misfires.
inline double score_f(const Instance& candidate, const Instance& origin) {
    if (candidate.size() != origin.size())
        throw ContractError("score_f: instances differ in length");
    if (candidate.size() == 0) return 1.0;
    std::size_t equal = 0;
    for (std::size_t i = 0; i < candidate.size(); ++i)
        if (feature_value_equal(candidate.values[i], origin.values[i])) ++equal;
    return static_cast<double>(equal) / static_cast<double>(candidate.size());
}

/// Similarity in the feature space: 1 − Gower distance.
inline double score_x(const Instance& candidate, const Instance& origin,
                      const FeatureSchema& schema) {
    return 1.0 - gower_distance(candidate, origin, schema);
}

/// Binary membership: 1 iff the model assigns the candidate to the target.
inline double sy_hard(int assigned_cluster, int target) {
    return assigned_cluster == target ? 1.0 : 0.0;
}

/// Scaled distance to the target centroid: 1 at min_dist, 0 at max_dist,
/// linear in between, clipped to [0, 1] for points closer than min or
/// farther than max. A degenerate summary (max == min) steps at min_dist.
inline double sy_centroid_distance(double distance_to_centroid, const ClusterSummary& summary) {
    const double range = summary.max_dist - summary.min_dist;
    if (range <= 0.0) return distance_to_centroid <= summary.min_dist ? 1.0 : 0.0;
    const double s = 1.0 - (distance_to_centroid - summary.min_dist) / range;
    return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

/// Target component of a membership-probability vector.
inline double sy_membership(const std::vector<double>& probabilities, int target) {
    double sum = 0.0;
    for (double p : probabilities) sum += p;
    if (std::abs(sum - 1.0) > 1e-6)
        throw ContractError("membership probabilities do not sum to 1");
    if (target < 0 || static_cast<std::size_t>(target) >= probabilities.size())
        throw ContractError("membership target outside probability vector");
    return probabilities[static_cast<std::size_t>(target)];
}

/// Output-space similarity strategy. Implementations capture only
/// immutable fitted state and are safe to share across threads.
class SyStrategy {
public:
    virtual ~SyStrategy() = default;
    virtual double score(const Instance& candidate, int target) const = 0;
    virtual std::string name() const = 0;
};

/// 0/1 target-cluster membership (the supervised-generator baseline).
class HardSy final : public SyStrategy {
public:
    explicit HardSy(std::shared_ptr<const FittedModel> fitted) : fitted_(std::move(fitted)) {}
    double score(const Instance& candidate, int target) const override {
        return sy_hard(fitted_->assign(candidate), target);
    }
    std::string name() const override { return "hard"; }

private:
    std::shared_ptr<const FittedModel> fitted_;
};

/// Model-specific soft score from the target cluster's summary.
class CentroidDistanceSy final : public SyStrategy {
public:
    explicit CentroidDistanceSy(std::shared_ptr<const FittedModel> fitted)
        : fitted_(std::move(fitted)) {}
    double score(const Instance& candidate, int target) const override {
        const ClusterSummary& s = fitted_->model->summary_for(target);
        return sy_centroid_distance(euclidean(fitted_->space.encode(candidate), s.centroid), s);
    }
    std::string name() const override { return "distance"; }

private:
    std::shared_ptr<const FittedModel> fitted_;
};

/// Model-agnostic soft score: target-cluster probability from any
/// membership provider (here the self-training classifier).
class MembershipSy final : public SyStrategy {
public:
    using Provider = std::function<std::vector<double>(const std::vector<double>&)>;

    MembershipSy(std::shared_ptr<const FittedModel> fitted, Provider provider)
        : fitted_(std::move(fitted)), provider_(std::move(provider)) {}

    double score(const Instance& candidate, int target) const override {
        return sy_membership(provider_(fitted_->space.encode(candidate)), target);
    }
    std::string name() const override { return "agnostic"; }

private:
    std::shared_ptr<const FittedModel> fitted_;
    Provider provider_;
};

/// Full objective for a candidate against the explained instance.
inline ScoreBreakdown total_score(const Instance& candidate, const Instance& origin,
                                  const FeatureSchema& schema, int target, const SyStrategy& sy) {
    ScoreBreakdown b;
    b.s_f = score_f(candidate, origin);
    b.s_x = score_x(candidate, origin, schema);
    b.s_y = sy.score(candidate, target);
    b.total = b.s_f * b.s_x * b.s_y;
    return b;
}

} // namespace clustercf

#endif
