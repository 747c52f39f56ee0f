#include <algorithm>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "clustercf/search.hpp"
#include "fixtures.hpp"

using namespace clustercf;
using testfixtures::make_blobs;

namespace {

struct TwoBlobWorld {
    Dataset dataset;
    std::shared_ptr<const FittedModel> fitted;
    OutlierGuard guard;
    Instance origin;
    int origin_cluster;
    int target;
};

TwoBlobWorld make_world(std::uint64_t seed) {
    // blobs one feature apart: a single-feature change can cross over
    auto dataset = make_blobs({{0.0, 0.0}, {10.0, 0.0}}, 1.0, 50, seed);
    auto fitted = std::make_shared<FittedModel>(fit_kmeans_pipeline(dataset, 2, 5));
    auto guard = OutlierGuard::fit(fitted->space.encode_all(dataset), seed + 1);
    const Instance origin = dataset.rows[0];
    const int origin_cluster = fitted->assign(origin);
    return {std::move(dataset), fitted, std::move(guard), origin, origin_cluster,
            1 - origin_cluster};
}

SearchConfig fast_config(std::uint64_t seed) {
    SearchConfig config;
    config.initial_samples = 40;
    config.candidates_per_round = 100;
    config.evaluations_per_round = 10;
    config.max_rounds = 8;
    config.surrogate_trees = 25;
    config.rng_seed = seed;
    return config;
}

} // namespace

TEST(Explain, FindsValidCounterfactualOnTwoBlobFixture) {
    auto world = make_world(301);
    HardSy hard(world.fitted);
    const auto result = explain(world.origin, world.target, *world.fitted, hard, &world.guard,
                                fast_config(1));
    ASSERT_FALSE(result.counterfactuals.empty());
    for (const auto& cf : result.counterfactuals) {
        EXPECT_TRUE(cf.valid);
        EXPECT_EQ(world.fitted->assign(cf.instance), world.target);
        EXPECT_TRUE(world.guard.passes(world.fitted->space.encode(cf.instance)));
        EXPECT_GT(cf.breakdown.total, 0.0);
        EXPECT_LE(cf.breakdown.total, 1.0);
    }
}

TEST(Explain, PreconditionsRejected) {
    auto world = make_world(302);
    HardSy hard(world.fitted);
    const auto config = fast_config(2);
    EXPECT_THROW(
        explain(world.origin, world.origin_cluster, *world.fitted, hard, &world.guard, config),
        ContractError);
    EXPECT_THROW(explain(world.origin, kNoise, *world.fitted, hard, &world.guard, config),
                 ContractError);
    EXPECT_THROW(explain(world.origin, 7, *world.fitted, hard, &world.guard, config),
                 ContractError);
}

TEST(Explain, EmptyResultWhenNothingReachable) {
    auto world = make_world(303);
    HardSy hard(world.fitted);
    SearchConfig config = fast_config(3);
    config.initial_samples = 2; // almost no search at all
    config.max_rounds = 0;
    const auto result = explain(world.origin, world.target, *world.fitted, hard, &world.guard,
                                config);
    EXPECT_GE(result.evaluations, 1);
    if (result.counterfactuals.empty()) {
        EXPECT_FALSE(result.time_to_first.has_value());
        EXPECT_FALSE(result.time_to_best.has_value());
    }
}

TEST(Explain, ResultSortedByScoreWithConsistentTelemetry) {
    auto world = make_world(304);
    CentroidDistanceSy soft(world.fitted);
    const auto result = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                                fast_config(4));
    ASSERT_FALSE(result.counterfactuals.empty());
    for (std::size_t i = 1; i < result.counterfactuals.size(); ++i)
        EXPECT_GE(result.counterfactuals[i - 1].breakdown.total,
                  result.counterfactuals[i].breakdown.total);
    ASSERT_TRUE(result.time_to_first.has_value());
    ASSERT_TRUE(result.time_to_best.has_value());
    EXPECT_LE(*result.time_to_first, *result.time_to_best);
    // best counterfactual's timestamp matches the reported time_to_best
    EXPECT_DOUBLE_EQ(result.counterfactuals.front().found_at >= 0 ? *result.time_to_best
                                                                  : -1.0,
                     *result.time_to_best);
}

TEST(Explain, DeterministicReplayIsByteIdentical) {
    auto world = make_world(305);
    CentroidDistanceSy soft(world.fitted);
    const auto a = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                           fast_config(5));
    const auto b = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                           fast_config(5));
    EXPECT_EQ(search_result_to_json(a, world.dataset.schema).dump(),
              search_result_to_json(b, world.dataset.schema).dump());
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Explain, DifferentSeedsExploreDifferently) {
    auto world = make_world(306);
    CentroidDistanceSy soft(world.fitted);
    const auto a = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                           fast_config(6));
    const auto b = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                           fast_config(7));
    EXPECT_NE(search_result_to_json(a, world.dataset.schema).dump(),
              search_result_to_json(b, world.dataset.schema).dump());
}

TEST(Explain, HardStrategyInvalidCandidatesScoreZero) {
    auto world = make_world(307);
    HardSy hard(world.fitted);
    // evaluate by hand what the loop evaluates: any instance not assigned
    // to the target has s_y = 0 and total = 0 under the hard strategy
    Rng rng(8);
    auto candidates = sample_candidates(world.origin, world.dataset.schema, 200, rng);
    for (const auto& c : candidates) {
        const auto b = total_score(c, world.origin, world.dataset.schema, world.target, hard);
        if (world.fitted->assign(c) != world.target) {
            EXPECT_DOUBLE_EQ(b.s_y, 0.0);
            EXPECT_DOUBLE_EQ(b.total, 0.0);
        } else {
            EXPECT_DOUBLE_EQ(b.s_y, 1.0);
            EXPECT_DOUBLE_EQ(b.total, b.s_f * b.s_x);
        }
    }
}

TEST(Explain, GuardDisabledAdmitsEverythingValid) {
    auto world = make_world(308);
    HardSy hard(world.fitted);
    SearchConfig config = fast_config(9);
    config.outlier_guard_enabled = false;
    const auto unguarded = explain(world.origin, world.target, *world.fitted, hard, &world.guard,
                                   config);
    config.outlier_guard_enabled = true;
    const auto guarded = explain(world.origin, world.target, *world.fitted, hard, &world.guard,
                                 config);
    // same seed, same candidate stream: the guard can only remove entries
    EXPECT_GE(unguarded.counterfactuals.size(), guarded.counterfactuals.size());
}

TEST(Explain, WallClockTimingMode) {
    auto world = make_world(309);
    CentroidDistanceSy soft(world.fitted);
    SearchConfig config = fast_config(10);
    config.deterministic_timing = false;
    const auto result = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                                config);
    EXPECT_EQ(result.timing_mode, "wall");
    if (result.time_to_first) {
        EXPECT_GE(*result.time_to_first, 0.0);
        EXPECT_LE(*result.time_to_first, *result.time_to_best);
    }
}

TEST(Explain, TimeBudgetStopsTheSearch) {
    auto world = make_world(310);
    CentroidDistanceSy soft(world.fitted);
    SearchConfig config = fast_config(11);
    config.deterministic_timing = true;
    config.seconds_per_evaluation = 1.0; // every evaluation costs a virtual second
    config.time_budget_seconds = 5.0;
    const auto result = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                                config);
    EXPECT_LE(result.evaluations, 5);
}

TEST(Explain, CountsEveryTrueEvaluation) {
    auto world = make_world(311);
    HardSy hard(world.fitted);
    SearchConfig config = fast_config(12);
    const auto result = explain(world.origin, world.target, *world.fitted, hard, &world.guard,
                                config);
    EXPECT_EQ(result.evaluations,
              config.initial_samples + config.max_rounds * config.evaluations_per_round);
}

TEST(Explain, SoftStrategyReachesFirstHitNoLaterThanHardOnFarFixture) {
    // 4-D blobs separated along three features: reaching the target basin
    // requires moving all three at once, so hard scoring is 0 over almost
    // the whole sampled space while the soft score has a gradient
    const auto dataset =
        make_blobs({{0.0, 0.0, 0.0, 0.0}, {10.0, 10.0, 10.0, 0.0}}, 1.0, 60, 313);
    auto fitted = std::make_shared<FittedModel>(fit_kmeans_pipeline(dataset, 2, 5));
    auto guard = OutlierGuard::fit(fitted->space.encode_all(dataset), 99);
    const Instance origin = dataset.rows[0];
    const int target = 1 - fitted->assign(origin);

    HardSy hard(fitted);
    CentroidDistanceSy soft(fitted);

    std::vector<double> hard_firsts, soft_firsts;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SearchConfig config = fast_config(1000 + seed);
        config.initial_samples = 30;
        config.candidates_per_round = 150;
        config.evaluations_per_round = 10;
        config.max_rounds = 12;
        const auto h = explain(origin, target, *fitted, hard, &guard, config);
        const auto s = explain(origin, target, *fitted, soft, &guard, config);
        hard_firsts.push_back(h.time_to_first.value_or(1e18));
        soft_firsts.push_back(s.time_to_first.value_or(1e18));
    }
    EXPECT_LE(median_of(soft_firsts), median_of(hard_firsts));
}

TEST(Explain, JsonDeltasReportOnlyChangedFeatures) {
    auto world = make_world(314);
    CentroidDistanceSy soft(world.fitted);
    const auto result = explain(world.origin, world.target, *world.fitted, soft, &world.guard,
                                fast_config(15));
    const auto j = search_result_to_json(result, world.dataset.schema);
    ASSERT_TRUE(j.contains("counterfactuals"));
    for (std::size_t i = 0; i < result.counterfactuals.size(); ++i) {
        const auto& cf = result.counterfactuals[i];
        const auto& deltas = j["counterfactuals"][i]["deltas"];
        std::size_t changed = 0;
        for (std::size_t f = 0; f < world.dataset.schema.size(); ++f)
            if (!feature_value_equal(cf.instance.values[f], world.origin.values[f])) ++changed;
        EXPECT_EQ(deltas.size(), changed);
    }
}
