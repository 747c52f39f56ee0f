#ifndef CLUSTERCF_TESTS_FIXTURES_HPP
#define CLUSTERCF_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "clustercf/common.hpp"
#include "clustercf/schema.hpp"

namespace clustercf::testfixtures {

/// Isotropic uniform blobs around the given centers; schema ranges are
/// inferred from the generated data, mirroring CSV ingestion.
inline Dataset make_blobs(const std::vector<std::vector<double>>& centers, double spread,
                          std::size_t points_per_blob, std::uint64_t seed,
                          const std::string& id = "blobs") {
    Rng rng(seed);
    const std::size_t dim = centers[0].size();
    std::vector<std::vector<double>> points;
    for (const auto& center : centers)
        for (std::size_t i = 0; i < points_per_blob; ++i) {
            std::vector<double> p(dim);
            for (std::size_t j = 0; j < dim; ++j)
                p[j] = center[j] + rng.uniform(-spread, spread);
            points.push_back(std::move(p));
        }

    Dataset ds;
    ds.id = id;
    std::vector<FeatureSpec> specs;
    for (std::size_t j = 0; j < dim; ++j) {
        double lo = points[0][j], hi = points[0][j];
        for (const auto& p : points) {
            lo = std::min(lo, p[j]);
            hi = std::max(hi, p[j]);
        }
        specs.push_back(FeatureSpec::numeric("f" + std::to_string(j), lo, hi));
    }
    ds.schema = FeatureSchema(std::move(specs));
    for (const auto& p : points) {
        Instance row;
        for (double v : p) row.values.emplace_back(v);
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

inline std::vector<std::vector<double>> numeric_matrix(const Dataset& ds) {
    std::vector<std::vector<double>> m;
    m.reserve(ds.rows.size());
    for (const auto& row : ds.rows) {
        std::vector<double> v;
        v.reserve(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) v.push_back(row.num(j));
        m.push_back(std::move(v));
    }
    return m;
}

} // namespace clustercf::testfixtures

#endif
