#ifndef CLUSTERCF_MODEL_IO_HPP
#define CLUSTERCF_MODEL_IO_HPP

#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "clustercf/dbscan.hpp"
#include "clustercf/encoding.hpp"
#include "clustercf/kmeans.hpp"
#include "clustercf/scaling.hpp"
#include "clustercf/schema.hpp"

#include <nlohmann/json.hpp>

namespace clustercf {

/// A clustering model together with the space it was fitted in, so `fit`
/// and `explain` can run as separate processes. Immutable once built.
struct FittedModel {
    ModelSpace space;
    std::shared_ptr<const ClusterModel> model;
    std::string dataset_id;
    bool standardized = true;
    std::vector<std::string> warnings;

    /// Cluster id (or kNoise) for an instance in original units.
    int assign(const Instance& x) const { return model->assign(space.encode(x)); }

    /// Training labels in row order. DBSCAN keeps its fit-time labels
    /// (BFS expansion order matters for border points); k-means labels
    /// are reproduced by assignment, which is exact after convergence.
    std::vector<int> training_labels(const Dataset& dataset) const {
        if (const auto* db = dynamic_cast<const DbscanModel*>(model.get()))
            if (db->labels().size() == dataset.rows.size()) return db->labels();
        std::vector<int> labels;
        labels.reserve(dataset.rows.size());
        for (const auto& row : dataset.rows) labels.push_back(assign(row));
        return labels;
    }
};

namespace detail {

inline nlohmann::json schema_to_json(const FeatureSchema& schema) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& spec : schema.features()) {
        nlohmann::json f{{"name", spec.name}};
        if (spec.kind == FeatureKind::Numeric) {
            f["kind"] = "numeric";
            f["min"] = spec.min;
            f["max"] = spec.max;
        } else {
            f["kind"] = "categorical";
            f["domain"] = spec.domain;
        }
        arr.push_back(std::move(f));
    }
    return arr;
}

inline FeatureSchema schema_from_json(const nlohmann::json& arr) {
    std::vector<FeatureSpec> specs;
    for (const auto& f : arr) {
        if (f.at("kind") == "numeric") {
            specs.push_back(FeatureSpec::numeric(f.at("name").get<std::string>(),
                                                 f.at("min").get<double>(),
                                                 f.at("max").get<double>()));
        } else {
            specs.push_back(FeatureSpec::categorical(
                f.at("name").get<std::string>(), f.at("domain").get<std::vector<std::string>>()));
        }
    }
    return FeatureSchema(std::move(specs));
}

inline nlohmann::json summaries_to_json(const std::vector<ClusterSummary>& summaries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : summaries)
        arr.push_back({{"cluster_id", s.cluster_id},
                       {"centroid", s.centroid},
                       {"min_dist", s.min_dist},
                       {"max_dist", s.max_dist},
                       {"cardinality", s.cardinality}});
    return arr;
}

inline std::vector<ClusterSummary> summaries_from_json(const nlohmann::json& arr) {
    std::vector<ClusterSummary> out;
    for (const auto& j : arr) {
        ClusterSummary s;
        s.cluster_id = j.at("cluster_id").get<int>();
        s.centroid = j.at("centroid").get<std::vector<double>>();
        s.min_dist = j.at("min_dist").get<double>();
        s.max_dist = j.at("max_dist").get<double>();
        s.cardinality = j.at("cardinality").get<std::size_t>();
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace detail

inline nlohmann::json model_to_json(const FittedModel& fm) {
    nlohmann::json j;
    j["algorithm"] = fm.model->algorithm();
    j["metric"] = fm.model->metric();
    j["dataset_id"] = fm.dataset_id;
    j["standardized"] = fm.standardized;
    j["schema"] = detail::schema_to_json(fm.space.schema());
    j["scaling"] = fm.space.scaling().to_json(fm.space.schema());
    j["summaries"] = detail::summaries_to_json(fm.model->summaries());
    j["warnings"] = fm.warnings;
    if (const auto* km = dynamic_cast<const KMeansModel*>(fm.model.get())) {
        j["kmeans"] = {{"k", km->num_clusters()},
                       {"seed", km->seed()},
                       {"inertia", km->inertia()},
                       {"centroids", km->centroids()}};
    } else if (const auto* db = dynamic_cast<const DbscanModel*>(fm.model.get())) {
        j["dbscan"] = {{"eps", db->eps()},
                       {"min_pts", db->min_pts()},
                       {"num_clusters", db->num_clusters()},
                       {"core_samples", db->core_samples()},
                       {"core_labels", db->core_labels()},
                       {"labels", db->labels()}};
    } else {
        throw ContractError("unknown model type for serialization");
    }
    return j;
}

inline FittedModel model_from_json(const nlohmann::json& j) {
    FittedModel fm;
    FeatureSchema schema = detail::schema_from_json(j.at("schema"));
    ScalingParams scaling = ScalingParams::from_json(schema, j.at("scaling"));
    fm.space = ModelSpace(std::move(schema), std::move(scaling));
    fm.dataset_id = j.value("dataset_id", "");
    fm.standardized = j.value("standardized", true);
    fm.warnings = j.value("warnings", std::vector<std::string>{});
    auto summaries = detail::summaries_from_json(j.at("summaries"));
    const std::string algorithm = j.at("algorithm").get<std::string>();
    if (algorithm == "kmeans") {
        const auto& km = j.at("kmeans");
        fm.model = std::make_shared<KMeansModel>(KMeansModelAccess::make(
            km.at("centroids").get<std::vector<std::vector<double>>>(), std::move(summaries),
            km.at("inertia").get<double>(), km.at("seed").get<std::uint64_t>()));
    } else if (algorithm == "dbscan") {
        const auto& db = j.at("dbscan");
        fm.model = std::make_shared<DbscanModel>(DbscanModelAccess::make(
            db.at("eps").get<double>(), db.at("min_pts").get<int>(),
            db.at("num_clusters").get<int>(),
            db.at("core_samples").get<std::vector<std::vector<double>>>(),
            db.at("core_labels").get<std::vector<int>>(), db.at("labels").get<std::vector<int>>(),
            std::move(summaries)));
    } else {
        throw FormatError("unknown algorithm in model file: " + algorithm);
    }
    return fm;
}

inline void save_model(const FittedModel& fm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write model file: " + path);
    out << model_to_json(fm).dump(2) << "\n";
}

inline FittedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("malformed model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

/// Builds the model space (optional standardisation + one-hot encoding)
/// and fits the requested algorithm in it.
inline FittedModel fit_kmeans_pipeline(const Dataset& dataset, int k, std::uint64_t seed,
                                       bool standardize_numeric = true,
                                       const KMeansOptions& options = {}) {
    FittedModel fm;
    fm.standardized = standardize_numeric;
    fm.dataset_id = dataset.id;
    ScalingParams scaling = standardize_numeric ? ScalingParams::fit(dataset)
                                                : ScalingParams::identity(dataset.schema);
    fm.space = ModelSpace(dataset.schema, std::move(scaling));
    fm.model = std::make_shared<KMeansModel>(
        kmeans_fit(fm.space.encode_all(dataset), k, seed, options));
    return fm;
}

inline FittedModel fit_dbscan_pipeline(const Dataset& dataset, double eps, int min_pts,
                                       bool standardize_numeric = true) {
    FittedModel fm;
    fm.standardized = standardize_numeric;
    fm.dataset_id = dataset.id;
    ScalingParams scaling = standardize_numeric ? ScalingParams::fit(dataset)
                                                : ScalingParams::identity(dataset.schema);
    fm.space = ModelSpace(dataset.schema, std::move(scaling));
    fm.model = std::make_shared<DbscanModel>(
        dbscan_fit(fm.space.encode_all(dataset), eps, min_pts, &fm.warnings));
    return fm;
}

} // namespace clustercf

#endif
