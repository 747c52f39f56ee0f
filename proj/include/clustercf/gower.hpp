#ifndef CLUSTERCF_GOWER_HPP
#define CLUSTERCF_GOWER_HPP

#include <cmath>

#include "clustercf/schema.hpp"

namespace clustercf {

/// Per-feature Gower dissimilarity in [0, 1]. Numeric: range-normalised
/// absolute difference, clamped so out-of-range candidate values cannot
/// push the score above 1; constant training features contribute 0.
/// Categorical: mismatch indicator.
inline double gower_feature_dissimilarity(const FeatureSpec& spec, const FeatureValue& a,
                                          const FeatureValue& b) {
    if (spec.kind == FeatureKind::Numeric) {
        const double range = spec.max - spec.min;
        if (range <= 0.0) return 0.0;
        const double d = std::abs(std::get<double>(a) - std::get<double>(b)) / range;
        return d > 1.0 ? 1.0 : d;
    }
    return std::get<std::string>(a) == std::get<std::string>(b) ? 0.0 : 1.0;
}

/// Mean per-feature dissimilarity; symmetric, in [0, 1], and 0 exactly on
/// equal instances. Ranges come from the schema, frozen at training time.
inline double gower_distance(const Instance& a, const Instance& b, const FeatureSchema& schema) {
    if (a.size() != schema.size() || b.size() != schema.size())
        throw ContractError("gower_distance: instance does not match schema");
    if (schema.size() == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < schema.size(); ++i)
        total += gower_feature_dissimilarity(schema.at(i), a.values[i], b.values[i]);
    return total / static_cast<double>(schema.size());
}

} // namespace clustercf

#endif
