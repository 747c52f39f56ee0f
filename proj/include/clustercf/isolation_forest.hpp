#ifndef CLUSTERCF_ISOLATION_FOREST_HPP
#define CLUSTERCF_ISOLATION_FOREST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "clustercf/common.hpp"

namespace clustercf {

namespace detail {

/// Average unsuccessful-search path length of a BST with n nodes; the
/// normalisation constant of the isolation-forest anomaly score.
inline double isolation_c(std::size_t n) {
    if (n <= 1) return 0.0;
    const double m = static_cast<double>(n - 1);
    const double harmonic = std::log(m) + 0.5772156649015329;
    return 2.0 * harmonic - 2.0 * m / static_cast<double>(n);
}

class IsolationTree {
public:
    void fit(const std::vector<std::vector<double>>& X, std::vector<std::size_t> sample,
             std::size_t height_limit, Rng& rng) {
        nodes_.clear();
        build(X, std::move(sample), 0, height_limit, rng);
    }

    double path_length(const std::vector<double>& x) const {
        int node = 0;
        double depth = 0.0;
        while (nodes_[static_cast<std::size_t>(node)].left >= 0) {
            const auto& nd = nodes_[static_cast<std::size_t>(node)];
            node = x[nd.feature] < nd.threshold ? nd.left : nd.right;
            depth += 1.0;
        }
        return depth + isolation_c(nodes_[static_cast<std::size_t>(node)].size);
    }

private:
    struct Node {
        std::size_t feature = 0;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::size_t size = 0;
    };

    int build(const std::vector<std::vector<double>>& X, std::vector<std::size_t> idx,
              std::size_t depth, std::size_t height_limit, Rng& rng) {
        if (idx.size() <= 1 || depth >= height_limit) return make_leaf(idx.size());

        const std::size_t d = X[0].size();
        // try a few random features before giving up on a degenerate node
        for (int attempt = 0; attempt < 8; ++attempt) {
            const std::size_t f = rng.below(d);
            double lo = X[idx[0]][f], hi = lo;
            for (std::size_t i : idx) {
                lo = std::min(lo, X[i][f]);
                hi = std::max(hi, X[i][f]);
            }
            if (hi <= lo) continue;
            const double t = rng.uniform(lo, hi);
            std::vector<std::size_t> left_idx, right_idx;
            for (std::size_t i : idx) {
                if (X[i][f] < t)
                    left_idx.push_back(i);
                else
                    right_idx.push_back(i);
            }
            if (left_idx.empty() || right_idx.empty()) continue;
            const std::size_t total = idx.size();
            idx.clear();
            idx.shrink_to_fit();
            const int me = static_cast<int>(nodes_.size());
            nodes_.emplace_back();
            nodes_[static_cast<std::size_t>(me)].feature = f;
            nodes_[static_cast<std::size_t>(me)].threshold = t;
            nodes_[static_cast<std::size_t>(me)].size = total;
            const int l = build(X, std::move(left_idx), depth + 1, height_limit, rng);
            const int r = build(X, std::move(right_idx), depth + 1, height_limit, rng);
            nodes_[static_cast<std::size_t>(me)].left = l;
            nodes_[static_cast<std::size_t>(me)].right = r;
            return me;
        }
        return make_leaf(idx.size());
    }

    int make_leaf(std::size_t size) {
        Node n;
        n.size = size;
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<Node> nodes_;
};

} // namespace detail

struct OutlierGuardOptions {
    int num_trees = 100;
    std::size_t subsample = 256;
    double pass_fraction = 0.95; // share of training points the guard must admit
};

/// Isolation-forest guard against out-of-distribution counterfactuals.
/// The pass threshold is calibrated on the training anomaly scores so at
/// least `pass_fraction` of the training data is admitted.
class OutlierGuard {
public:
    static OutlierGuard fit(const std::vector<std::vector<double>>& X, std::uint64_t seed,
                            const OutlierGuardOptions& options = {}) {
        if (X.empty()) throw ContractError("outlier guard: empty training data");
        OutlierGuard guard;
        const std::size_t n = X.size();
        const std::size_t psi = std::min(options.subsample, n);
        guard.c_psi_ = detail::isolation_c(psi);
        const auto height_limit =
            static_cast<std::size_t>(std::ceil(std::log2(std::max<std::size_t>(2, psi))));

        Rng rng(seed);
        guard.trees_.resize(static_cast<std::size_t>(options.num_trees));
        for (auto& tree : guard.trees_) {
            Rng tree_rng = rng.fork();
            // subsample without replacement by partial shuffle
            std::vector<std::size_t> order(n);
            for (std::size_t i = 0; i < n; ++i) order[i] = i;
            for (std::size_t i = 0; i < psi; ++i)
                std::swap(order[i], order[i + tree_rng.below(n - i)]);
            order.resize(psi);
            tree.fit(X, std::move(order), height_limit, tree_rng);
        }

        std::vector<double> scores;
        scores.reserve(n);
        for (const auto& x : X) scores.push_back(guard.anomaly_score(x));
        std::sort(scores.begin(), scores.end());
        const auto k = static_cast<std::size_t>(
            std::ceil(options.pass_fraction * static_cast<double>(n)));
        guard.threshold_ = scores[std::min(n, std::max<std::size_t>(1, k)) - 1];
        return guard;
    }

    /// Anomaly score in (0, 1); larger is more anomalous.
    double anomaly_score(const std::vector<double>& x) const {
        double total = 0.0;
        for (const auto& tree : trees_) total += tree.path_length(x);
        const double mean_path = total / static_cast<double>(trees_.size());
        return std::pow(2.0, -mean_path / c_psi_);
    }

    bool passes(const std::vector<double>& x) const { return anomaly_score(x) <= threshold_; }

    double threshold() const { return threshold_; }

private:
    std::vector<detail::IsolationTree> trees_;
    double threshold_ = 1.0;
    double c_psi_ = 1.0;
};

} // namespace clustercf

#endif
