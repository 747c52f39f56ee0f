#ifndef CLUSTERCF_SCALING_HPP
#define CLUSTERCF_SCALING_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "clustercf/schema.hpp"

#include <nlohmann/json.hpp>

namespace clustercf {

/// Per-feature affine parameters mapping numeric columns to zero mean and
/// unit variance. Categorical columns keep identity parameters and pass
/// through untouched. Supports the inverse transform so counterfactuals
/// can be reported in the original units.
class ScalingParams {
public:
    ScalingParams() = default;

    static ScalingParams identity(const FeatureSchema& schema) {
        ScalingParams p;
        p.mean_.assign(schema.size(), 0.0);
        p.std_.assign(schema.size(), 1.0);
        return p;
    }

    static ScalingParams fit(const Dataset& dataset) {
        if (dataset.rows.empty()) throw ContractError("cannot fit scaling on empty dataset");
        const std::size_t d = dataset.schema.size();
        const double n = static_cast<double>(dataset.rows.size());
        ScalingParams p;
        p.mean_.assign(d, 0.0);
        p.std_.assign(d, 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            if (dataset.schema.at(j).kind != FeatureKind::Numeric) continue;
            double m = 0.0;
            for (const auto& row : dataset.rows) m += row.num(j);
            m /= n;
            double ss = 0.0;
            for (const auto& row : dataset.rows) {
                const double dlt = row.num(j) - m;
                ss += dlt * dlt;
            }
            const double sd = std::sqrt(ss / n); // population std
            p.mean_[j] = m;
            p.std_[j] = sd;
        }
        return p;
    }

    /// Scaled value; variance-0 features map to 0.
    double scale(std::size_t feature, double v) const {
        return std_[feature] > 0.0 ? (v - mean_[feature]) / std_[feature] : 0.0;
    }

    double unscale(std::size_t feature, double v) const {
        return std_[feature] > 0.0 ? v * std_[feature] + mean_[feature] : mean_[feature];
    }

    Instance apply(const FeatureSchema& schema, const Instance& x) const {
        Instance out = x;
        for (std::size_t j = 0; j < schema.size(); ++j)
            if (schema.at(j).kind == FeatureKind::Numeric)
                out.values[j] = scale(j, x.num(j));
        return out;
    }

    Instance invert(const FeatureSchema& schema, const Instance& x) const {
        Instance out = x;
        for (std::size_t j = 0; j < schema.size(); ++j)
            if (schema.at(j).kind == FeatureKind::Numeric)
                out.values[j] = unscale(j, x.num(j));
        return out;
    }

    double mean(std::size_t feature) const { return mean_[feature]; }
    double std(std::size_t feature) const { return std_[feature]; }
    std::size_t size() const { return mean_.size(); }

    nlohmann::json to_json(const FeatureSchema& schema) const {
        nlohmann::json j = nlohmann::json::object();
        for (std::size_t i = 0; i < schema.size(); ++i) {
            if (schema.at(i).kind != FeatureKind::Numeric) continue;
            j[schema.at(i).name] = {{"mean", mean_[i]}, {"std", std_[i]}};
        }
        return j;
    }

    static ScalingParams from_json(const FeatureSchema& schema, const nlohmann::json& j) {
        ScalingParams p = identity(schema);
        for (std::size_t i = 0; i < schema.size(); ++i) {
            const auto& name = schema.at(i).name;
            if (schema.at(i).kind != FeatureKind::Numeric) continue;
            if (!j.contains(name)) throw FormatError("scaling params missing feature: " + name);
            p.mean_[i] = j.at(name).at("mean").get<double>();
            p.std_[i] = j.at(name).at("std").get<double>();
        }
        return p;
    }

private:
    std::vector<double> mean_;
    std::vector<double> std_;
};

/// Zero-mean unit-variance standardisation of the numeric columns.
/// The schema of the returned dataset keeps the scaled ranges so Gower
/// computations on the standardized dataset stay consistent.
inline std::pair<Dataset, ScalingParams> standardize(const Dataset& dataset) {
    ScalingParams params = ScalingParams::fit(dataset);
    Dataset out;
    out.id = dataset.id;
    std::vector<FeatureSpec> specs;
    specs.reserve(dataset.schema.size());
    for (std::size_t j = 0; j < dataset.schema.size(); ++j) {
        FeatureSpec spec = dataset.schema.at(j);
        if (spec.kind == FeatureKind::Numeric) {
            spec.min = params.scale(j, spec.min);
            spec.max = params.scale(j, spec.max);
        }
        specs.push_back(std::move(spec));
    }
    out.schema = FeatureSchema(std::move(specs));
    out.rows.reserve(dataset.rows.size());
    for (const auto& row : dataset.rows) out.rows.push_back(params.apply(dataset.schema, row));
    return {std::move(out), std::move(params)};
}

} // namespace clustercf

#endif
