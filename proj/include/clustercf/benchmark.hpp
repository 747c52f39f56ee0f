#ifndef CLUSTERCF_BENCHMARK_HPP
#define CLUSTERCF_BENCHMARK_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clustercf/mmd_critic.hpp"
#include "clustercf/search.hpp"
#include "clustercf/self_training.hpp"
#include "clustercf/stats.hpp"

#include <nlohmann/json.hpp>

namespace clustercf {

/// Instance-selection protocol: five random members of each of the two
/// largest clusters, each targeting the other, repeated with fresh seeds.
struct ProtocolSpec {
    int instances_per_cluster = 5;
    int top_clusters = 2;
    int repeats = 3;

    int runs_per_strategy() const { return instances_per_cluster * top_clusters * repeats; }
};

/// One aggregated table row per (dataset, model, strategy, share).
struct MetricsRow {
    std::string dataset;
    std::string model;
    std::string strategy;
    double share = 0.2;
    double exp_pct = 0.0;
    std::optional<MeanStd> score_x;
    std::optional<MeanStd> score_f;
    std::optional<MeanStd> time_to_first;
    std::optional<MeanStd> time_to_best;
    std::optional<MeanStd> cf_count;
    int total_runs = 0;
    int successful_runs = 0;
};

struct RunRecord {
    std::string strategy;
    double share = 0.2;
    std::size_t origin_row = 0;
    int origin_cluster = kNoise;
    int target = kNoise;
    int repeat = 0;
    std::uint64_t seed = 0;
    SearchResult result;

    bool explained() const { return !result.counterfactuals.empty(); }
};

struct BenchmarkResult {
    std::vector<MetricsRow> rows;
    std::vector<RunRecord> runs;
    std::vector<std::string> warnings;
    nlohmann::json metadata;
};

/// Picks (origin row, target cluster) pairs from the two largest
/// clusters: members of the largest target the runner-up and vice versa.
/// Sampling is uniform without replacement and fully seeded. Clusters
/// smaller than the requested count contribute all their members.
inline std::vector<std::pair<std::size_t, int>> select_protocol_instances(
    const Dataset& dataset, const FittedModel& fitted, const ProtocolSpec& spec,
    std::uint64_t seed, std::vector<std::string>* warnings = nullptr) {
    const auto labels = fitted.training_labels(dataset);
    std::vector<std::pair<std::size_t, int>> cluster_sizes; // (cardinality, id)
    for (const auto& s : fitted.model->summaries())
        cluster_sizes.emplace_back(s.cardinality, s.cluster_id);
    if (cluster_sizes.size() < 2)
        throw ContractError("protocol needs at least two non-empty clusters");
    std::sort(cluster_sizes.begin(), cluster_sizes.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    const int cluster_b = cluster_sizes[0].second;
    const int cluster_c = cluster_sizes[1].second;

    Rng rng(seed);
    std::vector<std::pair<std::size_t, int>> selections;
    auto pick_from = [&](int from, int target) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == from) members.push_back(i);
        std::size_t want = static_cast<std::size_t>(spec.instances_per_cluster);
        if (members.size() < want) {
            if (warnings)
                warnings->push_back("cluster " + std::to_string(from) + " has only " +
                                    std::to_string(members.size()) + " members; using all");
            want = members.size();
        }
        for (std::size_t i = 0; i < want; ++i) {
            std::swap(members[i], members[i + rng.below(members.size() - i)]);
            selections.emplace_back(members[i], target);
        }
    };
    pick_from(cluster_b, cluster_c);
    pick_from(cluster_c, cluster_b);
    return selections;
}

namespace detail {

/// Strategy factory: hard and distance capture only the fitted model;
/// agnostic builds per-run representatives and a self-training classifier
/// (rebuilt each run by design, seeded).
inline std::shared_ptr<const SyStrategy> make_strategy(
    SyKind kind, const std::shared_ptr<const FittedModel>& fitted, const Dataset& dataset,
    const SearchConfig& config, std::uint64_t seed) {
    switch (kind) {
    case SyKind::Hard:
        return std::make_shared<HardSy>(fitted);
    case SyKind::CentroidDistance:
        return std::make_shared<CentroidDistanceSy>(fitted);
    case SyKind::Membership: {
        const auto encoded = fitted->space.encode_all(dataset);
        const auto labels = fitted->training_labels(dataset);
        const RepresentativeSet reps =
            build_representative_set(encoded, labels, fitted->model->num_clusters(),
                                     config.representative_share);
        std::vector<std::vector<double>> seed_x;
        std::vector<int> seed_y;
        std::vector<bool> used(encoded.size(), false);
        for (const auto& cluster : reps.clusters) {
            for (std::size_t r : cluster.prototype_rows) {
                seed_x.push_back(encoded[r]);
                seed_y.push_back(cluster.cluster_id);
                used[r] = true;
            }
            for (std::size_t r : cluster.criticism_rows) {
                seed_x.push_back(encoded[r]);
                seed_y.push_back(cluster.cluster_id);
                used[r] = true;
            }
        }
        std::vector<std::vector<double>> unlabeled;
        for (std::size_t i = 0; i < encoded.size(); ++i)
            if (!used[i]) unlabeled.push_back(encoded[i]);

        SelfTrainConfig st;
        st.threshold = config.self_train_threshold;
        st.max_rounds = config.self_train_rounds;
        st.num_trees = config.self_train_trees;
        st.seed = seed;
        auto model = std::make_shared<SelfTrainingModel>(
            self_train(std::move(seed_x), std::move(seed_y), unlabeled, st));
        const int k = fitted->model->num_clusters();
        return std::make_shared<MembershipSy>(
            fitted, [model, k](const std::vector<double>& x) {
                return model->membership_probabilities(x, k);
            });
    }
    }
    throw ContractError("unknown strategy kind");
}

} // namespace detail

/// Executes the full protocol for every requested (strategy, share) and
/// aggregates one metrics row each. Quality metrics aggregate the best
/// counterfactual of each successful run; runs that found nothing count
/// only toward the explained-percentage denominator.
inline BenchmarkResult run_benchmark(const Dataset& dataset,
                                     const std::shared_ptr<const FittedModel>& fitted,
                                     const std::vector<SyKind>& strategies,
                                     const std::vector<double>& shares, const ProtocolSpec& spec,
                                     const SearchConfig& base_config) {
    if (strategies.empty()) throw ContractError("run_benchmark: no strategies requested");
    if (spec.repeats < 1 || spec.instances_per_cluster < 1)
        throw ContractError("run_benchmark: protocol counts must be positive");

    BenchmarkResult bench;
    const auto selections = select_protocol_instances(dataset, fitted, spec,
                                                      base_config.rng_seed, &bench.warnings);
    const auto labels = fitted->training_labels(dataset);

    for (SyKind kind : strategies) {
        const std::vector<double> strategy_shares =
            kind == SyKind::Membership ? shares : std::vector<double>{base_config.representative_share};
        for (double share : strategy_shares) {
            MetricsRow row;
            row.dataset = dataset.id;
            row.model = fitted->model->algorithm();
            row.strategy = to_string(kind);
            row.share = share;

            std::vector<double> xs, fs, t_firsts, t_bests, counts;
            std::uint64_t run_index = 0;
            for (const auto& [origin_row, target] : selections) {
                for (int repeat = 0; repeat < spec.repeats; ++repeat, ++run_index) {
                    SearchConfig config = base_config;
                    config.sy_strategy = kind;
                    config.representative_share = share;
                    config.rng_seed = splitmix64(base_config.rng_seed ^
                                                 (0x9e3779b97f4a7c15ULL * (run_index + 1)));

                    RunRecord record;
                    record.strategy = row.strategy;
                    record.share = share;
                    record.origin_row = origin_row;
                    record.origin_cluster = labels[origin_row];
                    record.target = target;
                    record.repeat = repeat;
                    record.seed = config.rng_seed;

                    const auto strategy =
                        detail::make_strategy(kind, fitted, dataset, config, config.rng_seed);
                    const OutlierGuard guard = OutlierGuard::fit(
                        fitted->space.encode_all(dataset), splitmix64(config.rng_seed));
                    record.result = explain(dataset.rows[origin_row], target, *fitted, *strategy,
                                            &guard, config);

                    ++row.total_runs;
                    if (record.explained()) {
                        ++row.successful_runs;
                        const auto& best = record.result.counterfactuals.front();
                        xs.push_back(best.breakdown.s_x);
                        fs.push_back(best.breakdown.s_f);
                        if (record.result.time_to_first)
                            t_firsts.push_back(*record.result.time_to_first);
                        if (record.result.time_to_best)
                            t_bests.push_back(*record.result.time_to_best);
                        counts.push_back(
                            static_cast<double>(record.result.counterfactuals.size()));
                    }
                    bench.runs.push_back(std::move(record));
                }
            }
            row.exp_pct = row.total_runs == 0
                              ? 0.0
                              : 100.0 * static_cast<double>(row.successful_runs) /
                                    static_cast<double>(row.total_runs);
            if (row.successful_runs > 0) {
                row.score_x = mean_std(xs);
                row.score_f = mean_std(fs);
                row.time_to_first = mean_std(t_firsts);
                row.time_to_best = mean_std(t_bests);
                row.cf_count = mean_std(counts);
            }
            bench.rows.push_back(std::move(row));
        }
    }

    bench.metadata["protocol"] = {{"instances_per_cluster", spec.instances_per_cluster},
                                  {"top_clusters", spec.top_clusters},
                                  {"repeats", spec.repeats},
                                  {"seed", base_config.rng_seed}};
    bench.metadata["aggregation"] = {
        {"quality_scores", "best counterfactual per successful run"},
        {"std", "population"},
        {"time_denominator", "successful runs only"}};
    nlohmann::json cards = nlohmann::json::array();
    for (const auto& s : fitted->model->summaries()) cards.push_back(s.cardinality);
    bench.metadata["cluster_cardinalities"] = cards;
    bench.metadata["warnings"] = bench.warnings;
    return bench;
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string csv_pair(const std::optional<MeanStd>& m) {
    if (!m) return ",";
    return fmt(m->mean) + "," + fmt(m->std);
}

} // namespace detail

/// CSV with the fixed column schema used by downstream tooling. Rows with
/// zero successful runs leave their aggregate cells empty.
inline std::string benchmark_to_csv(const std::vector<MetricsRow>& rows) {
    std::string out =
        "dataset,model,strategy,share,exp_pct,score_x_mean,score_x_std,score_f_mean,"
        "score_f_std,t_first_mean,t_first_std,t_best_mean,t_best_std,cf_count_mean,"
        "cf_count_std\n";
    for (const auto& r : rows) {
        out += r.dataset + "," + r.model + "," + r.strategy + "," + detail::fmt(r.share) + "," +
               detail::fmt(r.exp_pct) + "," + detail::csv_pair(r.score_x) + "," +
               detail::csv_pair(r.score_f) + "," + detail::csv_pair(r.time_to_first) + "," +
               detail::csv_pair(r.time_to_best) + "," + detail::csv_pair(r.cf_count) + "\n";
    }
    return out;
}

/// Plain-text table for terminal output.
inline std::string benchmark_to_text(const std::vector<MetricsRow>& rows) {
    std::ostringstream os;
    os << "strategy    share  exp%    score_x        score_f        t_first        t_best        "
          " cf#\n";
    auto cell = [](const std::optional<MeanStd>& m) {
        if (!m) return std::string("-");
        std::ostringstream c;
        c.precision(2);
        c << std::fixed << m->mean << "(" << m->std << ")";
        return c.str();
    };
    for (const auto& r : rows) {
        os << r.strategy;
        os << std::string(r.strategy.size() < 12 ? 12 - r.strategy.size() : 1, ' ');
        std::ostringstream sh;
        sh.precision(2);
        sh << std::fixed << r.share;
        os << sh.str() << "   ";
        std::ostringstream ex;
        ex.precision(1);
        ex << std::fixed << r.exp_pct;
        os << ex.str() << "%  ";
        os << cell(r.score_x) << "  " << cell(r.score_f) << "  " << cell(r.time_to_first) << "  "
           << cell(r.time_to_best) << "  " << cell(r.cf_count) << "\n";
    }
    return os.str();
}

inline nlohmann::json run_log_to_json(const BenchmarkResult& bench, const FeatureSchema& schema) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : bench.runs) {
        runs.push_back({{"strategy", r.strategy},
                        {"share", r.share},
                        {"origin_row", r.origin_row},
                        {"origin_cluster", r.origin_cluster},
                        {"target", r.target},
                        {"repeat", r.repeat},
                        {"seed", r.seed},
                        {"explained", r.explained()},
                        {"result", search_result_to_json(r.result, schema)}});
    }
    return {{"metadata", bench.metadata}, {"runs", std::move(runs)}};
}

} // namespace clustercf

#endif
