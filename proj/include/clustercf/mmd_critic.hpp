#ifndef CLUSTERCF_MMD_CRITIC_HPP
#define CLUSTERCF_MMD_CRITIC_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "clustercf/cluster_model.hpp"
#include "clustercf/common.hpp"
#include "clustercf/model_io.hpp"

#include <nlohmann/json.hpp>

namespace clustercf {

struct KernelSpec {
    double gamma = 1.0; // RBF bandwidth, > 0
};

/// exp(−gamma · ‖a − b‖²); 1 on identical points, monotonically decaying.
inline double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b,
                         double gamma) {
    if (a.size() != b.size()) throw ContractError("rbf_kernel: dimension mismatch");
    if (gamma <= 0.0) throw ContractError("rbf_kernel: gamma must be positive");
    return std::exp(-gamma * squared_euclidean(a, b));
}

/// Median heuristic: gamma = 1 / (2·median²) over the pairwise Euclidean
/// distances of at most `sample_cap` points. Falls back to 1 when the
/// sample is degenerate.
inline double median_heuristic_gamma(const std::vector<std::vector<double>>& points,
                                     std::size_t sample_cap = 500) {
    const std::size_t n = std::min(points.size(), sample_cap);
    std::vector<double> dists;
    dists.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dists.push_back(euclidean(points[i], points[j]));
    if (dists.empty()) return 1.0;
    const double med = median_of(std::move(dists));
    if (med <= 0.0) return 1.0;
    return 1.0 / (2.0 * med * med);
}

/// Squared maximum mean discrepancy between prototype set Z and data X:
/// (1/m²)ΣΣ k(z,z') − (2/mn)ΣΣ k(z,x) + (1/n²)ΣΣ k(x,x').
inline double mmd_squared(const std::vector<std::vector<double>>& prototypes,
                          const std::vector<std::vector<double>>& data, const KernelSpec& kernel) {
    if (prototypes.empty() || data.empty())
        throw ContractError("mmd_squared: empty prototype or data set");
    const double m = static_cast<double>(prototypes.size());
    const double n = static_cast<double>(data.size());
    double zz = 0.0, zx = 0.0, xx = 0.0;
    for (const auto& zi : prototypes)
        for (const auto& zj : prototypes) zz += rbf_kernel(zi, zj, kernel.gamma);
    for (const auto& zi : prototypes)
        for (const auto& xj : data) zx += rbf_kernel(zi, xj, kernel.gamma);
    for (const auto& xi : data)
        for (const auto& xj : data) xx += rbf_kernel(xi, xj, kernel.gamma);
    return zz / (m * m) - 2.0 * zx / (m * n) + xx / (n * n);
}

/// Discrepancy between the data density and the prototype density at x:
/// (1/n)Σ k(x, x_i) − (1/m)Σ k(x, z_j). Positive where data is dense and
/// prototypes are not.
inline double witness(const std::vector<double>& x, const std::vector<std::vector<double>>& data,
                      const std::vector<std::vector<double>>& prototypes,
                      const KernelSpec& kernel) {
    if (prototypes.empty() || data.empty())
        throw ContractError("witness: empty prototype or data set");
    double dx = 0.0, dz = 0.0;
    for (const auto& xi : data) dx += rbf_kernel(x, xi, kernel.gamma);
    for (const auto& zj : prototypes) dz += rbf_kernel(x, zj, kernel.gamma);
    return dx / static_cast<double>(data.size()) - dz / static_cast<double>(prototypes.size());
}

/// Greedy MMD-critic prototype selection: each step adds the point whose
/// inclusion minimises MMD²(selected, points); ties break to the lowest
/// index. Kernel sums are computed incrementally, so the result is exactly
/// the greedy argmin without re-evaluating the triple sum.
inline std::vector<std::size_t> select_prototypes(const std::vector<std::vector<double>>& points,
                                                  std::size_t m, const KernelSpec& kernel) {
    const std::size_t n = points.size();
    if (m < 1 || m > n) throw ContractError("select_prototypes: m outside [1, n]");

    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    std::vector<double> col_mean(n, 0.0); // (1/n) Σ_j k(x_i, x_j)
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            gram[i][j] = rbf_kernel(points[i], points[j], kernel.gamma);
            col_mean[i] += gram[i][j];
        }
        col_mean[i] /= static_cast<double>(n);
    }

    std::vector<std::size_t> selected;
    std::vector<bool> in_set(n, false);
    std::vector<double> k_to_selected(n, 0.0); // Σ_{z in selected} k(x_i, z)
    double zz_sum = 0.0;                       // ΣΣ over selected pairs
    double zx_mean_sum = 0.0;                  // Σ_{z in selected} col_mean[z]

    for (std::size_t step = 0; step < m; ++step) {
        const double mm = static_cast<double>(step + 1);
        std::size_t best = n;
        double best_obj = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) {
            if (in_set[c]) continue;
            const double zz = zz_sum + 2.0 * k_to_selected[c] + gram[c][c];
            const double zx = zx_mean_sum + col_mean[c];
            const double obj = zz / (mm * mm) - 2.0 * zx / mm; // xx term constant
            if (obj < best_obj) {
                best_obj = obj;
                best = c;
            }
        }
        in_set[best] = true;
        zz_sum += 2.0 * k_to_selected[best] + gram[best][best];
        zx_mean_sum += col_mean[best];
        for (std::size_t i = 0; i < n; ++i) k_to_selected[i] += gram[best][i];
        selected.push_back(best);
    }
    return selected;
}

/// Picks the `c` non-prototype points with the largest |witness| values;
/// ties break to the lowest index. Returns fewer (with a warning) when
/// not enough points remain.
inline std::vector<std::size_t> select_criticisms(const std::vector<std::vector<double>>& points,
                                                  const std::vector<std::size_t>& prototypes,
                                                  std::size_t c, const KernelSpec& kernel,
                                                  std::vector<std::string>* warnings = nullptr) {
    std::vector<bool> is_proto(points.size(), false);
    for (std::size_t p : prototypes) is_proto[p] = true;
    std::vector<std::vector<double>> proto_points;
    proto_points.reserve(prototypes.size());
    for (std::size_t p : prototypes) proto_points.push_back(points[p]);

    std::vector<std::pair<double, std::size_t>> ranked; // (-|witness|, index)
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (is_proto[i]) continue;
        ranked.emplace_back(-std::abs(witness(points[i], points, proto_points, kernel)), i);
    }
    std::sort(ranked.begin(), ranked.end());
    if (c > ranked.size()) {
        if (warnings)
            warnings->push_back("requested " + std::to_string(c) + " criticisms but only " +
                                std::to_string(ranked.size()) + " points remain");
        c = ranked.size();
    }
    std::vector<std::size_t> out;
    out.reserve(c);
    for (std::size_t i = 0; i < c; ++i) out.push_back(ranked[i].second);
    return out;
}

/// Prototypes and criticisms of one cluster, as dataset row indices.
struct ClusterRepresentatives {
    int cluster_id = 0;
    std::vector<std::size_t> prototype_rows;
    std::vector<std::size_t> criticism_rows;
};

struct RepresentativeSet {
    double share = 0.2;
    double gamma = 1.0;
    std::vector<ClusterRepresentatives> clusters;
    std::vector<std::string> warnings;

    std::size_t total_size() const {
        std::size_t t = 0;
        for (const auto& c : clusters) t += c.prototype_rows.size() + c.criticism_rows.size();
        return t;
    }
};

/// Per-cluster representative selection: budget = max(1, round(share ·
/// cardinality)), split 4:1 between prototypes (ceiling) and criticisms.
/// NOISE points never contribute. `labels` must align with the encoded
/// rows; the kernel bandwidth defaults to the median heuristic over the
/// whole training matrix.
inline RepresentativeSet build_representative_set(const std::vector<std::vector<double>>& encoded,
                                                  const std::vector<int>& labels, int num_clusters,
                                                  double share, double gamma = 0.0) {
    if (share <= 0.0 || share > 1.0)
        throw ContractError("build_representative_set: share outside (0, 1]");
    RepresentativeSet set;
    set.share = share;
    set.gamma = gamma > 0.0 ? gamma : median_heuristic_gamma(encoded);
    const KernelSpec kernel{set.gamma};

    for (int c = 0; c < num_clusters; ++c) {
        std::vector<std::size_t> member_rows;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) member_rows.push_back(i);
        if (member_rows.empty()) {
            set.warnings.push_back("cluster " + std::to_string(c) +
                                   " has no members; skipped in representative selection");
            continue;
        }
        std::vector<std::vector<double>> member_points;
        member_points.reserve(member_rows.size());
        for (std::size_t r : member_rows) member_points.push_back(encoded[r]);

        const std::size_t budget = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(share * static_cast<double>(member_rows.size()))));
        const std::size_t num_protos =
            std::min(member_rows.size(),
                     static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(budget))));
        const std::size_t num_crits = budget - num_protos;

        ClusterRepresentatives reps;
        reps.cluster_id = c;
        const auto proto_idx = select_prototypes(member_points, num_protos, kernel);
        const auto crit_idx =
            select_criticisms(member_points, proto_idx, num_crits, kernel, &set.warnings);
        for (std::size_t p : proto_idx) reps.prototype_rows.push_back(member_rows[p]);
        for (std::size_t q : crit_idx) reps.criticism_rows.push_back(member_rows[q]);
        set.clusters.push_back(std::move(reps));
    }
    return set;
}

inline RepresentativeSet build_representative_set(const Dataset& dataset, const FittedModel& fitted,
                                                  double share, double gamma = 0.0) {
    const auto encoded = fitted.space.encode_all(dataset);
    const auto labels = fitted.training_labels(dataset);
    return build_representative_set(encoded, labels, fitted.model->num_clusters(), share, gamma);
}

inline nlohmann::json representative_set_to_json(const RepresentativeSet& set) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : set.clusters)
        clusters.push_back({{"cluster_id", c.cluster_id},
                            {"prototypes", c.prototype_rows},
                            {"criticisms", c.criticism_rows}});
    return {{"share", set.share},
            {"gamma", set.gamma},
            {"clusters", clusters},
            {"warnings", set.warnings}};
}

} // namespace clustercf

#endif
