#ifndef CLUSTERCF_REGRESSION_FOREST_HPP
#define CLUSTERCF_REGRESSION_FOREST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "clustercf/common.hpp"

namespace clustercf {

namespace detail {

/// CART-style regression tree grown on a bootstrap sample. Splits
/// minimise the weighted sum of squared errors over midpoints between
/// consecutive distinct values of a random feature subset.
class RegressionTree {
public:
    void fit(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
             std::vector<std::size_t> sample, std::size_t mtry, Rng& rng) {
        nodes_.clear();
        build(X, y, std::move(sample), mtry, rng);
    }

    double predict(const std::vector<double>& x) const {
        int node = 0;
        while (nodes_[static_cast<std::size_t>(node)].left >= 0) {
            const auto& nd = nodes_[static_cast<std::size_t>(node)];
            node = x[nd.feature] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<std::size_t>(node)].value;
    }

private:
    struct Node {
        std::size_t feature = 0;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    int build(const std::vector<std::vector<double>>& X, const std::vector<double>& y,
              std::vector<std::size_t> idx, std::size_t mtry, Rng& rng) {
        double sum = 0.0;
        for (std::size_t i : idx) sum += y[i];
        const double node_mean = sum / static_cast<double>(idx.size());
        bool constant = true;
        for (std::size_t i : idx)
            if (y[i] != y[idx[0]]) {
                constant = false;
                break;
            }
        if (constant || idx.size() < 2) return make_leaf(node_mean);

        const std::size_t d = X[0].size();
        std::vector<std::size_t> features(d);
        for (std::size_t i = 0; i < d; ++i) features[i] = i;
        const std::size_t k = std::min(mtry, d);
        for (std::size_t i = 0; i < k; ++i)
            std::swap(features[i], features[i + rng.below(d - i)]);

        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        double best_sse = std::numeric_limits<double>::infinity();
        bool found = false;
        std::vector<std::pair<double, double>> vals; // (x_f, y)
        for (std::size_t fi = 0; fi < k; ++fi) {
            const std::size_t f = features[fi];
            vals.clear();
            vals.reserve(idx.size());
            for (std::size_t i : idx) vals.emplace_back(X[i][f], y[i]);
            std::sort(vals.begin(), vals.end());
            if (vals.front().first == vals.back().first) continue;

            double right_sum = 0.0, right_sq = 0.0;
            for (const auto& [xv, yv] : vals) {
                right_sum += yv;
                right_sq += yv * yv;
            }
            double left_sum = 0.0, left_sq = 0.0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left_sum += vals[i].second;
                left_sq += vals[i].second * vals[i].second;
                right_sum -= vals[i].second;
                right_sq -= vals[i].second * vals[i].second;
                if (vals[i].first == vals[i + 1].first) continue;
                const double ln = static_cast<double>(i + 1);
                const double rn = static_cast<double>(vals.size() - i - 1);
                const double sse = (left_sq - left_sum * left_sum / ln) +
                                   (right_sq - right_sum * right_sum / rn);
                if (sse < best_sse) {
                    best_sse = sse;
                    best_feature = f;
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                    found = true;
                }
            }
        }
        if (!found) return make_leaf(node_mean);

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (X[i][best_feature] <= best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        if (left_idx.empty() || right_idx.empty()) return make_leaf(node_mean);
        idx.clear();
        idx.shrink_to_fit();

        const int me = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        nodes_[static_cast<std::size_t>(me)].feature = best_feature;
        nodes_[static_cast<std::size_t>(me)].threshold = best_threshold;
        const int l = build(X, y, std::move(left_idx), mtry, rng);
        const int r = build(X, y, std::move(right_idx), mtry, rng);
        nodes_[static_cast<std::size_t>(me)].left = l;
        nodes_[static_cast<std::size_t>(me)].right = r;
        return me;
    }

    int make_leaf(double value) {
        Node n;
        n.value = value;
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<Node> nodes_;
};

} // namespace detail

struct ForestOptions {
    int num_trees = 100;
    std::size_t mtry = 0; // 0 = max(1, d/3)
};

/// Bootstrap-aggregated regression forest used as the search surrogate.
/// predict() returns the mean and the spread (population std) of the
/// per-tree predictions; the spread is the surrogate's uncertainty.
class RegressionForest {
public:
    static RegressionForest fit(const std::vector<std::vector<double>>& X,
                                const std::vector<double>& y, std::uint64_t seed,
                                const ForestOptions& options = {}) {
        if (X.empty() || y.size() != X.size())
            throw ContractError("fit_surrogate: observations empty or misaligned");
        RegressionForest forest;
        const std::size_t n = X.size();
        const std::size_t d = X[0].size();
        const std::size_t mtry =
            options.mtry > 0 ? options.mtry : std::max<std::size_t>(1, d / 3);
        Rng rng(seed);
        forest.trees_.resize(static_cast<std::size_t>(options.num_trees));
        forest.in_bag_.assign(forest.trees_.size(), std::vector<std::uint32_t>(n, 0));
        for (std::size_t t = 0; t < forest.trees_.size(); ++t) {
            Rng tree_rng = rng.fork();
            std::vector<std::size_t> sample(n);
            for (auto& s : sample) {
                s = tree_rng.below(n);
                ++forest.in_bag_[t][s];
            }
            forest.trees_[t].fit(X, y, std::move(sample), mtry, tree_rng);
        }
        return forest;
    }

    std::pair<double, double> predict(const std::vector<double>& x) const {
        std::vector<double> predictions;
        predictions.reserve(trees_.size());
        double sum = 0.0;
        bool unanimous = true;
        for (const auto& tree : trees_) {
            const double p = tree.predict(x);
            predictions.push_back(p);
            sum += p;
            unanimous = unanimous && p == predictions.front();
        }
        if (unanimous) return {predictions.front(), 0.0}; // exact, no accumulation error
        const double n = static_cast<double>(predictions.size());
        const double mean = sum / n;
        double ss = 0.0;
        for (double p : predictions) ss += (p - mean) * (p - mean);
        return {mean, std::sqrt(ss / n)};
    }

    /// Mean absolute out-of-bag residual over the training data; rows that
    /// every tree sampled are skipped.
    double oob_mae(const std::vector<std::vector<double>>& X, const std::vector<double>& y) const {
        double total = 0.0;
        std::size_t counted = 0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            double sum = 0.0;
            std::size_t votes = 0;
            for (std::size_t t = 0; t < trees_.size(); ++t) {
                if (in_bag_[t][i] != 0) continue;
                sum += trees_[t].predict(X[i]);
                ++votes;
            }
            if (votes == 0) continue;
            total += std::abs(sum / static_cast<double>(votes) - y[i]);
            ++counted;
        }
        return counted == 0 ? 0.0 : total / static_cast<double>(counted);
    }

    std::size_t num_trees() const { return trees_.size(); }

private:
    std::vector<detail::RegressionTree> trees_;
    std::vector<std::vector<std::uint32_t>> in_bag_;
};

} // namespace clustercf

#endif
