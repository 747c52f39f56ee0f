#ifndef CLUSTERCF_CANDIDATES_HPP
#define CLUSTERCF_CANDIDATES_HPP

#include <vector>

#include "clustercf/common.hpp"
#include "clustercf/schema.hpp"

namespace clustercf {

/// Neighbourhood sampler around the explained instance. Each candidate
/// changes a uniformly-sized, uniformly-chosen subset of the mutable
/// features: numeric values are redrawn uniformly within the training
/// range, categorical values uniformly from the domain minus the current
/// value. Unchanged features are copied bit-for-bit, which keeps the
/// feature-sparsity score exact. Features that cannot take a second value
/// (constant range, single-token domain) are never selected.
inline std::vector<Instance> sample_candidates(const Instance& origin,
                                               const FeatureSchema& schema, std::size_t n,
                                               Rng& rng) {
    check_conforms(schema, origin);
    std::vector<std::size_t> mutable_features;
    for (std::size_t j = 0; j < schema.size(); ++j) {
        const auto& spec = schema.at(j);
        if (spec.kind == FeatureKind::Numeric ? spec.max > spec.min : spec.domain.size() > 1)
            mutable_features.push_back(j);
    }

    std::vector<Instance> out;
    out.reserve(n);
    if (mutable_features.empty()) return out;

    std::vector<std::size_t> pool = mutable_features;
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t subset_size = 1 + rng.below(mutable_features.size());
        for (std::size_t i = 0; i < subset_size; ++i)
            std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);

        Instance candidate = origin;
        for (std::size_t i = 0; i < subset_size; ++i) {
            const std::size_t j = pool[i];
            const auto& spec = schema.at(j);
            if (spec.kind == FeatureKind::Numeric) {
                double v;
                do {
                    v = rng.uniform(spec.min, spec.max);
                } while (v == origin.num(j));
                candidate.values[j] = v;
            } else {
                const auto& cur = origin.cat(j);
                std::size_t pick = rng.below(spec.domain.size() - 1);
                std::size_t seen = 0;
                for (const auto& token : spec.domain) {
                    if (token == cur) continue;
                    if (seen++ == pick) {
                        candidate.values[j] = token;
                        break;
                    }
                }
            }
        }
        out.push_back(std::move(candidate));
    }
    return out;
}

} // namespace clustercf

#endif
