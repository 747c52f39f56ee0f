#ifndef CLUSTERCF_EXTRA_TREES_HPP
#define CLUSTERCF_EXTRA_TREES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "clustercf/common.hpp"

namespace clustercf {

namespace detail {

/// One extremely randomized classification tree: at each node, K =
/// ceil(sqrt(d)) random candidate features each get one uniform-random
/// threshold; the best split by Gini impurity wins. Trained on the full
/// sample (no bootstrap). Leaves are pure or hold at most 2 samples.
class ExtraTree {
public:
    void fit(const std::vector<std::vector<double>>& X, const std::vector<std::size_t>& y,
             std::size_t num_classes, Rng& rng) {
        num_classes_ = num_classes;
        std::vector<std::size_t> idx(X.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        nodes_.clear();
        build(X, y, std::move(idx), rng);
    }

    std::size_t predict_class(const std::vector<double>& x) const {
        int node = 0;
        while (nodes_[static_cast<std::size_t>(node)].left >= 0) {
            const auto& nd = nodes_[static_cast<std::size_t>(node)];
            node = x[nd.feature] < nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<std::size_t>(node)].leaf_class;
    }

private:
    struct Node {
        std::size_t feature = 0;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::size_t leaf_class = 0;
    };

    static double gini(const std::vector<std::size_t>& counts, double total) {
        double g = 1.0;
        for (std::size_t c : counts) {
            const double p = static_cast<double>(c) / total;
            g -= p * p;
        }
        return g;
    }

    int build(const std::vector<std::vector<double>>& X, const std::vector<std::size_t>& y,
              std::vector<std::size_t> idx, Rng& rng) {
        std::vector<std::size_t> counts(num_classes_, 0);
        for (std::size_t i : idx) ++counts[y[i]];
        const std::size_t majority = static_cast<std::size_t>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        const bool pure = counts[majority] == idx.size();

        if (pure || idx.size() <= 2) return make_leaf(majority);

        const std::size_t d = X[0].size();
        const std::size_t k = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(d))));

        // sample k distinct candidate features by partial shuffle
        std::vector<std::size_t> features(d);
        for (std::size_t i = 0; i < d; ++i) features[i] = i;
        for (std::size_t i = 0; i < k; ++i)
            std::swap(features[i], features[i + rng.below(d - i)]);

        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        double best_score = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t fi = 0; fi < k; ++fi) {
            const std::size_t f = features[fi];
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i : idx) {
                lo = std::min(lo, X[i][f]);
                hi = std::max(hi, X[i][f]);
            }
            if (hi <= lo) continue;
            const double t = rng.uniform(lo, hi);
            std::vector<std::size_t> lc(num_classes_, 0), rc(num_classes_, 0);
            double ln = 0.0, rn = 0.0;
            for (std::size_t i : idx) {
                if (X[i][f] < t) {
                    ++lc[y[i]];
                    ++ln;
                } else {
                    ++rc[y[i]];
                    ++rn;
                }
            }
            if (ln == 0.0 || rn == 0.0) continue;
            const double score = (ln * gini(lc, ln) + rn * gini(rc, rn)) / (ln + rn);
            if (score < best_score) {
                best_score = score;
                best_feature = f;
                best_threshold = t;
                found = true;
            }
        }
        if (!found) return make_leaf(majority);

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (X[i][best_feature] < best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        const int me = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[static_cast<std::size_t>(me)].feature = best_feature;
        nodes_[static_cast<std::size_t>(me)].threshold = best_threshold;
        const int l = build(X, y, std::move(left_idx), rng);
        const int r = build(X, y, std::move(right_idx), rng);
        nodes_[static_cast<std::size_t>(me)].left = l;
        nodes_[static_cast<std::size_t>(me)].right = r;
        return me;
    }

    int make_leaf(std::size_t cls) {
        Node n;
        n.leaf_class = cls;
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<Node> nodes_;
    std::size_t num_classes_ = 0;
};

} // namespace detail

/// Extremely-randomized-trees classifier. predict_proba is the fraction
/// of trees voting each class, so components are non-negative and sum to
/// 1. Fully deterministic for a fixed seed.
class TreeEnsembleClassifier {
public:
    static TreeEnsembleClassifier fit(const std::vector<std::vector<double>>& X,
                                      const std::vector<int>& y, int num_trees,
                                      std::uint64_t seed) {
        if (X.empty() || y.size() != X.size())
            throw ContractError("fit_ensemble: labelled data is empty or misaligned");
        if (num_trees < 1) throw ContractError("fit_ensemble: num_trees must be >= 1");

        TreeEnsembleClassifier model;
        model.seed_ = seed;
        model.classes_ = y;
        std::sort(model.classes_.begin(), model.classes_.end());
        model.classes_.erase(std::unique(model.classes_.begin(), model.classes_.end()),
                             model.classes_.end());

        std::vector<std::size_t> dense(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            dense[i] = static_cast<std::size_t>(
                std::lower_bound(model.classes_.begin(), model.classes_.end(), y[i]) -
                model.classes_.begin());

        Rng rng(seed);
        model.trees_.resize(static_cast<std::size_t>(num_trees));
        for (auto& tree : model.trees_) {
            Rng tree_rng = rng.fork();
            tree.fit(X, dense, model.classes_.size(), tree_rng);
        }
        return model;
    }

    /// Vote fractions aligned with classes().
    std::vector<double> predict_proba(const std::vector<double>& x) const {
        std::vector<double> votes(classes_.size(), 0.0);
        for (const auto& tree : trees_) votes[tree.predict_class(x)] += 1.0;
        for (double& v : votes) v /= static_cast<double>(trees_.size());
        return votes;
    }

    int predict(const std::vector<double>& x) const {
        const auto p = predict_proba(x);
        return classes_[static_cast<std::size_t>(
            std::max_element(p.begin(), p.end()) - p.begin())];
    }

    /// Probabilities expanded over cluster ids [0, num_clusters); classes
    /// absent from the training labels get probability 0.
    std::vector<double> predict_proba_over(const std::vector<double>& x, int num_clusters) const {
        const auto p = predict_proba(x);
        std::vector<double> out(static_cast<std::size_t>(num_clusters), 0.0);
        for (std::size_t i = 0; i < classes_.size(); ++i)
            if (classes_[i] >= 0 && classes_[i] < num_clusters)
                out[static_cast<std::size_t>(classes_[i])] = p[i];
        return out;
    }

    const std::vector<int>& classes() const { return classes_; }
    std::size_t num_trees() const { return trees_.size(); }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<detail::ExtraTree> trees_;
    std::vector<int> classes_;
    std::uint64_t seed_ = 0;
};

} // namespace clustercf

#endif
