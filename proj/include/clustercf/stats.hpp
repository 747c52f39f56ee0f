#ifndef CLUSTERCF_STATS_HPP
#define CLUSTERCF_STATS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "clustercf/common.hpp"

namespace clustercf {

struct MannWhitneyResult {
    double u = 0.0;       // U statistic of the first sample
    double p_value = 1.0; // two-sided, normal approximation
};

/// Rank-sum test. U counts (a < b) pairs plus half the ties, which is
/// algebraically identical to the rank formulation. The p-value uses the
/// normal approximation with tie-corrected variance and a continuity
/// correction; degenerate samples (zero variance) report p = 1.
inline MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a,
                                        const std::vector<double>& sample_b) {
    if (sample_a.empty() || sample_b.empty())
        throw ContractError("mann_whitney_u: both samples must be non-empty");
    const double n1 = static_cast<double>(sample_a.size());
    const double n2 = static_cast<double>(sample_b.size());

    double u = 0.0;
    for (double a : sample_a)
        for (double b : sample_b) {
            if (a < b)
                u += 1.0;
            else if (a == b)
                u += 0.5;
        }

    std::map<double, std::size_t> tie_groups;
    for (double a : sample_a) ++tie_groups[a];
    for (double b : sample_b) ++tie_groups[b];
    const double n = n1 + n2;
    double tie_term = 0.0;
    for (const auto& [value, count] : tie_groups) {
        const double t = static_cast<double>(count);
        tie_term += t * t * t - t;
    }

    const double mu = n1 * n2 / 2.0;
    double sigma_sq = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    MannWhitneyResult result;
    result.u = u;
    if (sigma_sq <= 0.0) {
        result.p_value = 1.0;
        return result;
    }
    const double diff = u - mu;
    const double correction = diff > 0.0 ? -0.5 : (diff < 0.0 ? 0.5 : 0.0);
    const double z = (diff + correction) / std::sqrt(sigma_sq);
    result.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
    return result;
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    return {mean_of(xs), stddev_of(xs), xs.size()};
}

} // namespace clustercf

#endif
