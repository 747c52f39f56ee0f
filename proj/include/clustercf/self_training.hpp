#ifndef CLUSTERCF_SELF_TRAINING_HPP
#define CLUSTERCF_SELF_TRAINING_HPP

#include <cstdint>
#include <vector>

#include "clustercf/extra_trees.hpp"

namespace clustercf {

struct SelfTrainConfig {
    double threshold = 0.75; // min top-class probability to pseudo-label
    int max_rounds = 10;
    int num_trees = 100;
    std::uint64_t seed = 0;
};

/// A self-trained classifier plus the per-round pseudo-label counts that
/// document how the labelled pool grew.
struct SelfTrainingModel {
    TreeEnsembleClassifier base;
    std::vector<std::size_t> pseudo_labels_per_round;
    std::size_t seed_count = 0;

    std::vector<double> membership_probabilities(const std::vector<double>& x,
                                                 int num_clusters) const {
        return base.predict_proba_over(x, num_clusters);
    }
};

/// Yarowsky-style self-training: fit the ensemble on the labelled pool,
/// pseudo-label the unlabelled points whose top class probability clears
/// the threshold, and repeat until nothing new is labelled or the round
/// cap is reached. Original seed labels are never revisited; neither are
/// pseudo-labels once assigned.
inline SelfTrainingModel self_train(std::vector<std::vector<double>> labeled_x,
                                    std::vector<int> labeled_y,
                                    const std::vector<std::vector<double>>& unlabeled_x,
                                    const SelfTrainConfig& config = {}) {
    if (labeled_x.empty()) throw ContractError("self_train: no labelled seeds");
    if (config.threshold <= 0.5 || config.threshold > 1.0)
        throw ContractError("self_train: threshold must lie in (0.5, 1]");

    SelfTrainingModel model;
    model.seed_count = labeled_x.size();
    std::vector<bool> consumed(unlabeled_x.size(), false);

    // first fit uses config.seed directly, so with no unlabelled data the
    // result coincides exactly with a plain ensemble fit on the seeds
    Rng rng(config.seed);
    auto fit_round = [&](std::uint64_t s) {
        return TreeEnsembleClassifier::fit(labeled_x, labeled_y, config.num_trees, s);
    };

    model.base = fit_round(config.seed);
    for (int round = 0; round < config.max_rounds; ++round) {
        std::size_t added = 0;
        for (std::size_t i = 0; i < unlabeled_x.size(); ++i) {
            if (consumed[i]) continue;
            const auto proba = model.base.predict_proba(unlabeled_x[i]);
            const auto top = std::max_element(proba.begin(), proba.end());
            if (*top >= config.threshold) {
                labeled_x.push_back(unlabeled_x[i]);
                labeled_y.push_back(
                    model.base.classes()[static_cast<std::size_t>(top - proba.begin())]);
                consumed[i] = true;
                ++added;
            }
        }
        model.pseudo_labels_per_round.push_back(added);
        if (added == 0) break;
        model.base = fit_round(splitmix64(rng.next()));
    }
    return model;
}

} // namespace clustercf

#endif
