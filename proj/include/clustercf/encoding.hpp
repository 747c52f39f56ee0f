#ifndef CLUSTERCF_ENCODING_HPP
#define CLUSTERCF_ENCODING_HPP

#include <string>
#include <vector>

#include "clustercf/scaling.hpp"
#include "clustercf/schema.hpp"

namespace clustercf {

/// The numeric coordinate space a clustering model is fitted in: numeric
/// features standardized by `scaling` (identity when standardisation is
/// disabled), categorical features one-hot over their sorted domain.
/// Frozen at fit time; the counterfactual search keeps candidates in the
/// original mixed space and encodes at this boundary.
class ModelSpace {
public:
    ModelSpace() = default;

    ModelSpace(FeatureSchema schema, ScalingParams scaling)
        : schema_(std::move(schema)), scaling_(std::move(scaling)) {
        offsets_.reserve(schema_.size());
        std::size_t off = 0;
        for (const auto& spec : schema_.features()) {
            offsets_.push_back(off);
            off += spec.kind == FeatureKind::Numeric ? 1 : spec.domain.size();
        }
        dim_ = off;
    }

    std::size_t dim() const { return dim_; }
    const FeatureSchema& schema() const { return schema_; }
    const ScalingParams& scaling() const { return scaling_; }

    /// Encodes an instance given in original units.
    std::vector<double> encode(const Instance& x) const {
        check_conforms(schema_, x);
        std::vector<double> out(dim_, 0.0);
        for (std::size_t j = 0; j < schema_.size(); ++j) {
            const auto& spec = schema_.at(j);
            if (spec.kind == FeatureKind::Numeric) {
                out[offsets_[j]] = scaling_.scale(j, x.num(j));
            } else {
                const auto& v = x.cat(j);
                const auto it = std::lower_bound(spec.domain.begin(), spec.domain.end(), v);
                out[offsets_[j] + static_cast<std::size_t>(it - spec.domain.begin())] = 1.0;
            }
        }
        return out;
    }

    std::vector<std::vector<double>> encode_all(const Dataset& dataset) const {
        std::vector<std::vector<double>> m;
        m.reserve(dataset.rows.size());
        for (const auto& row : dataset.rows) m.push_back(encode(row));
        return m;
    }

private:
    FeatureSchema schema_;
    ScalingParams scaling_;
    std::vector<std::size_t> offsets_;
    std::size_t dim_ = 0;
};

} // namespace clustercf

#endif
