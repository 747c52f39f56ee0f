#ifndef CLUSTERCF_ACQUISITION_HPP
#define CLUSTERCF_ACQUISITION_HPP

#include <cmath>

#include "clustercf/common.hpp"

namespace clustercf {

/// Closed-form expected improvement of a Gaussian prediction over the
/// incumbent, with exploration margin xi:
///   z  = (mean − best − xi) / std
///   EI = (mean − best − xi)·Φ(z) + std·φ(z)
/// A zero-uncertainty prediction has zero expected improvement.
inline double expected_improvement(double mean, double std, double best, double xi) {
    if (std < 0.0) throw ContractError("expected_improvement: std must be non-negative");
    if (std == 0.0) return 0.0;
    const double delta = mean - best - xi;
    const double z = delta / std;
    const double ei = delta * normal_cdf(z) + std * normal_pdf(z);
    return ei > 0.0 ? ei : 0.0;
}

} // namespace clustercf

#endif
