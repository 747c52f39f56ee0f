#ifndef CLUSTERCF_SEARCH_HPP
#define CLUSTERCF_SEARCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clustercf/acquisition.hpp"
#include "clustercf/candidates.hpp"
#include "clustercf/isolation_forest.hpp"
#include "clustercf/model_io.hpp"
#include "clustercf/regression_forest.hpp"
#include "clustercf/scoring.hpp"

#include <nlohmann/json.hpp>

namespace clustercf {

enum class SyKind { Hard, CentroidDistance, Membership };

inline std::string to_string(SyKind kind) {
    switch (kind) {
    case SyKind::Hard: return "hard";
    case SyKind::CentroidDistance: return "distance";
    case SyKind::Membership: return "agnostic";
    }
    return "hard";
}

inline SyKind sy_kind_from_string(const std::string& s) {
    if (s == "hard") return SyKind::Hard;
    if (s == "distance" || s == "centroid_distance") return SyKind::CentroidDistance;
    if (s == "agnostic" || s == "membership") return SyKind::Membership;
    throw ContractError("unknown scoring strategy: " + s);
}

struct SearchConfig {
    SyKind sy_strategy = SyKind::Hard;
    int initial_samples = 100;
    int candidates_per_round = 500; // sampled into the acquisition pool
    int evaluations_per_round = 20; // top of the pool scored for real
    int max_rounds = 50;
    double time_budget_seconds = 60.0;
    double xi = 0.01;
    int surrogate_trees = 100;
    std::uint64_t rng_seed = 42;
    bool outlier_guard_enabled = true;

    // timestamps: with deterministic timing each true evaluation advances
    // a virtual clock by seconds_per_evaluation, making result files
    // byte-identical across reruns; wall timing reports real seconds
    bool deterministic_timing = true;
    double seconds_per_evaluation = 1e-3;

    // membership-strategy knobs
    double representative_share = 0.2;
    double self_train_threshold = 0.75;
    int self_train_rounds = 10;
    int self_train_trees = 100;

    void validate() const {
        if (initial_samples < 0 || candidates_per_round <= 0 || evaluations_per_round <= 0 ||
            max_rounds < 0 || time_budget_seconds <= 0.0)
            throw ContractError("search config: budgets must be positive");
        if (xi < 0.0) throw ContractError("search config: xi must be non-negative");
        if (surrogate_trees < 1) throw ContractError("search config: surrogate_trees must be >= 1");
    }
};

struct CandidateCounterfactual {
    Instance instance;
    ScoreBreakdown breakdown;
    int assigned_cluster = kNoise;
    bool valid = false;
    double found_at = 0.0; // seconds since search start
};

struct SearchResult {
    Instance origin;
    int target = 0;
    std::vector<CandidateCounterfactual> counterfactuals; // valid, by total desc
    std::optional<double> time_to_first;
    std::optional<double> time_to_best;
    std::int64_t evaluations = 0;
    std::string timing_mode;
};

namespace detail {

class SearchClock {
public:
    explicit SearchClock(bool deterministic, double seconds_per_eval)
        : deterministic_(deterministic), seconds_per_eval_(seconds_per_eval),
          start_(std::chrono::steady_clock::now()) {}

    void tick_evaluation() { ++evals_; }

    double now() const {
        if (deterministic_) return static_cast<double>(evals_) * seconds_per_eval_;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool deterministic_;
    double seconds_per_eval_;
    std::int64_t evals_ = 0;
    std::chrono::steady_clock::time_point start_;
};

} // namespace detail

/// Bayesian counterfactual search around `origin`. Seeds the surrogate
/// with a random batch, then each round samples a fresh candidate pool,
/// ranks it by expected improvement under the regression-forest surrogate
/// and evaluates only the top slice with the true objective. Valid
/// candidates (model assigns the target) that clear the outlier guard are
/// collected and returned ranked by total score, ties by earliest found.
inline SearchResult explain(const Instance& origin, int target, const FittedModel& fitted,
                            const SyStrategy& sy, const OutlierGuard* guard,
                            const SearchConfig& config) {
    config.validate();
    const FeatureSchema& schema = fitted.space.schema();
    check_conforms(schema, origin);
    if (target == kNoise) throw ContractError("explain: NOISE is not a valid target");
    fitted.model->summary_for(target); // throws when the target cluster does not exist
    if (fitted.assign(origin) == target)
        throw ContractError("explain: instance already belongs to the target cluster");

    Rng rng(config.rng_seed);
    detail::SearchClock clock(config.deterministic_timing, config.seconds_per_evaluation);

    SearchResult result;
    result.origin = origin;
    result.target = target;
    result.timing_mode = config.deterministic_timing ? "deterministic" : "wall";

    std::vector<std::vector<double>> observed_x;
    std::vector<double> observed_y;
    double best_score = 0.0;

    auto out_of_budget = [&] { return clock.now() >= config.time_budget_seconds; };

    auto evaluate = [&](Instance candidate) {
        const ScoreBreakdown breakdown = total_score(candidate, origin, schema, target, sy);
        clock.tick_evaluation();
        ++result.evaluations;
        observed_x.push_back(fitted.space.encode(candidate));
        observed_y.push_back(breakdown.total);
        best_score = std::max(best_score, breakdown.total);

        const int assigned = fitted.assign(candidate);
        if (assigned != target) return;
        if (breakdown.total <= 0.0) return; // zero-objective candidates are worthless
        if (config.outlier_guard_enabled && guard != nullptr && !guard->passes(observed_x.back()))
            return;
        for (const auto& cf : result.counterfactuals)
            if (cf.instance == candidate) return; // keep the earliest copy
        CandidateCounterfactual cf;
        cf.instance = std::move(candidate);
        cf.breakdown = breakdown;
        cf.assigned_cluster = assigned;
        cf.valid = true;
        cf.found_at = clock.now();
        result.counterfactuals.push_back(std::move(cf));
    };

    for (auto& candidate :
         sample_candidates(origin, schema, static_cast<std::size_t>(config.initial_samples), rng)) {
        if (out_of_budget()) break;
        evaluate(std::move(candidate));
    }

    for (int round = 0; round < config.max_rounds && !out_of_budget(); ++round) {
        auto pool = sample_candidates(origin, schema,
                                      static_cast<std::size_t>(config.candidates_per_round), rng);
        if (observed_x.empty()) { // no surrogate signal yet (initial_samples = 0)
            const std::size_t take =
                std::min(pool.size(), static_cast<std::size_t>(config.evaluations_per_round));
            for (std::size_t i = 0; i < take && !out_of_budget(); ++i)
                evaluate(std::move(pool[i]));
            continue;
        }
        ForestOptions fo;
        fo.num_trees = config.surrogate_trees;
        const RegressionForest surrogate =
            RegressionForest::fit(observed_x, observed_y, splitmix64(rng.next()), fo);

        std::vector<std::pair<double, std::size_t>> ranked;
        ranked.reserve(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const auto [mean, std] = surrogate.predict(fitted.space.encode(pool[i]));
            ranked.emplace_back(-expected_improvement(mean, std, best_score, config.xi), i);
        }
        std::sort(ranked.begin(), ranked.end()); // EI desc, pool index asc on ties

        const std::size_t take =
            std::min(pool.size(), static_cast<std::size_t>(config.evaluations_per_round));
        for (std::size_t i = 0; i < take && !out_of_budget(); ++i)
            evaluate(std::move(pool[ranked[i].second]));
    }

    if (!result.counterfactuals.empty()) {
        result.time_to_first = result.counterfactuals.front().found_at;
        const auto best = std::max_element(
            result.counterfactuals.begin(), result.counterfactuals.end(),
            [](const auto& a, const auto& b) { return a.breakdown.total < b.breakdown.total; });
        result.time_to_best = best->found_at; // max_element keeps the earliest on ties
        std::stable_sort(result.counterfactuals.begin(), result.counterfactuals.end(),
                         [](const auto& a, const auto& b) {
                             return a.breakdown.total > b.breakdown.total;
                         });
    }
    return result;
}

namespace detail {

inline nlohmann::json instance_to_json(const Instance& x, const FeatureSchema& schema) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema.at(i).kind == FeatureKind::Numeric)
            j[schema.at(i).name] = x.num(i);
        else
            j[schema.at(i).name] = x.cat(i);
    }
    return j;
}

} // namespace detail

/// Serialises a result with sparse feature deltas in original units.
inline nlohmann::json search_result_to_json(const SearchResult& result,
                                            const FeatureSchema& schema) {
    nlohmann::json counterfactuals = nlohmann::json::array();
    for (const auto& cf : result.counterfactuals) {
        nlohmann::json deltas = nlohmann::json::object();
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (feature_value_equal(cf.instance.values[i], result.origin.values[i])) continue;
            nlohmann::json d;
            if (schema.at(i).kind == FeatureKind::Numeric) {
                d["from"] = result.origin.num(i);
                d["to"] = cf.instance.num(i);
            } else {
                d["from"] = result.origin.cat(i);
                d["to"] = cf.instance.cat(i);
            }
            deltas[schema.at(i).name] = std::move(d);
        }
        counterfactuals.push_back({{"deltas", std::move(deltas)},
                                   {"breakdown",
                                    {{"s_f", cf.breakdown.s_f},
                                     {"s_x", cf.breakdown.s_x},
                                     {"s_y", cf.breakdown.s_y},
                                     {"total", cf.breakdown.total}}},
                                   {"assigned_cluster", cf.assigned_cluster},
                                   {"found_at", cf.found_at}});
    }
    nlohmann::json telemetry{{"evaluations", result.evaluations},
                             {"timing_mode", result.timing_mode}};
    if (result.time_to_first) telemetry["time_to_first"] = *result.time_to_first;
    if (result.time_to_best) telemetry["time_to_best"] = *result.time_to_best;
    return {{"origin", detail::instance_to_json(result.origin, schema)},
            {"target", result.target},
            {"counterfactuals", std::move(counterfactuals)},
            {"telemetry", std::move(telemetry)}};
}

} // namespace clustercf

#endif
