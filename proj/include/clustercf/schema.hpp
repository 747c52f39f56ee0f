#ifndef CLUSTERCF_SCHEMA_HPP
#define CLUSTERCF_SCHEMA_HPP

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "clustercf/common.hpp"

namespace clustercf {

enum class FeatureKind { Numeric, Categorical };

/// One column of a tabular feature space. Numeric features carry the
/// observed [min, max] training range (basis for Gower normalisation and
/// candidate sampling); categorical features carry their value domain,
/// kept sorted so downstream iteration order is deterministic.
struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    double min = 0.0;
    double max = 0.0;
    std::vector<std::string> domain;

    static FeatureSpec numeric(std::string name, double min, double max) {
        FeatureSpec s;
        s.name = std::move(name);
        s.kind = FeatureKind::Numeric;
        s.min = min;
        s.max = max;
        return s;
    }

    static FeatureSpec categorical(std::string name, std::vector<std::string> domain) {
        FeatureSpec s;
        s.name = std::move(name);
        s.kind = FeatureKind::Categorical;
        std::sort(domain.begin(), domain.end());
        domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
        s.domain = std::move(domain);
        return s;
    }

    bool in_domain(const std::string& v) const {
        return std::binary_search(domain.begin(), domain.end(), v);
    }
};

class FeatureSchema {
public:
    FeatureSchema() = default;

    explicit FeatureSchema(std::vector<FeatureSpec> features)
        : features_(std::move(features)) {
        std::unordered_set<std::string> seen;
        for (const auto& f : features_) {
            if (!seen.insert(f.name).second)
                throw ContractError("duplicate feature name: " + f.name);
            if (f.kind == FeatureKind::Numeric && f.min > f.max)
                throw ContractError("numeric range inverted for feature: " + f.name);
            if (f.kind == FeatureKind::Categorical && f.domain.empty())
                throw ContractError("empty categorical domain for feature: " + f.name);
        }
    }

    std::size_t size() const { return features_.size(); }
    const FeatureSpec& at(std::size_t i) const { return features_[i]; }
    const std::vector<FeatureSpec>& features() const { return features_; }

    bool operator==(const FeatureSchema& other) const {
        if (features_.size() != other.features_.size()) return false;
        for (std::size_t i = 0; i < features_.size(); ++i) {
            const auto& a = features_[i];
            const auto& b = other.features_[i];
            if (a.name != b.name || a.kind != b.kind) return false;
            if (a.kind == FeatureKind::Numeric) {
                if (a.min != b.min || a.max != b.max) return false;
            } else if (a.domain != b.domain) {
                return false;
            }
        }
        return true;
    }

private:
    std::vector<FeatureSpec> features_;
};

/// A single cell: real number for numeric columns, token for categorical.
using FeatureValue = std::variant<double, std::string>;

inline bool feature_value_equal(const FeatureValue& a, const FeatureValue& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<double>(a))
        return std::abs(std::get<double>(a) - std::get<double>(b)) <= 1e-12;
    return std::get<std::string>(a) == std::get<std::string>(b);
}

struct Instance {
    std::vector<FeatureValue> values;

    double num(std::size_t i) const { return std::get<double>(values[i]); }
    const std::string& cat(std::size_t i) const { return std::get<std::string>(values[i]); }
    std::size_t size() const { return values.size(); }

    bool operator==(const Instance& other) const {
        if (values.size() != other.values.size()) return false;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (values[i].index() != other.values[i].index()) return false;
            if (std::holds_alternative<double>(values[i])) {
                if (std::get<double>(values[i]) != std::get<double>(other.values[i]))
                    return false;
            } else if (std::get<std::string>(values[i]) != std::get<std::string>(other.values[i])) {
                return false;
            }
        }
        return true;
    }
};

/// Throws ContractError unless `x` is aligned with `schema` (length, value
/// kinds, categorical membership). Numeric values outside the training
/// range are allowed; Gower clamps them.
inline void check_conforms(const FeatureSchema& schema, const Instance& x) {
    if (x.size() != schema.size())
        throw ContractError("instance length does not match schema");
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const auto& spec = schema.at(i);
        if (spec.kind == FeatureKind::Numeric) {
            if (!std::holds_alternative<double>(x.values[i]))
                throw ContractError("expected numeric value for feature: " + spec.name);
        } else {
            if (!std::holds_alternative<std::string>(x.values[i]))
                throw ContractError("expected categorical value for feature: " + spec.name);
            if (!spec.in_domain(std::get<std::string>(x.values[i])))
                throw ContractError("value outside categorical domain for feature: " + spec.name);
        }
    }
}

struct Dataset {
    FeatureSchema schema;
    std::vector<Instance> rows;
    std::string id;

    std::size_t num_rows() const { return rows.size(); }
    std::size_t num_features() const { return schema.size(); }
};

} // namespace clustercf

#endif
