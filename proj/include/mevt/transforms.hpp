#pragma once

// Marginal standardization of tail samples to the Fréchet scale and the
// pseudo-polar Pickands coordinate transform. Deeper fades map to larger
// Fréchet values; the Pickands radial component is nonpositive by
// construction, with the angular component in [0,1] under the sum norm.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mevt/core.hpp"

namespace mevt {

inline constexpr double kFrechetClampCap = 1e12;

struct FrechetPair {
    double x_tilde = 1.0;
    double y_tilde = 1.0;
    std::int64_t window = 0;
};

struct PickandsPoint {
    double omega = 0.5;  // angular, in [0,1]
    double r = -1.0;     // radial, <= 0
};

/// Fréchet transform of a sub-threshold sample:
///   x_tilde = -1 / log{1 - zeta [1 + xi (u-x)/sigma]^(-1/xi)}.
/// Depths at or beyond a negative-xi endpoint would map to +inf; they are
/// clamped to `cap` and counted via `clamped` when provided.
inline double frechet_transform(double x, const GpdParams& p, double cap = kFrechetClampCap,
                                std::size_t* clamped = nullptr) {
    p.validate();
    if (!(x < p.u)) throw std::domain_error("frechet_transform: sample not below threshold");
    const double l = p.u - x;
    double surv;  // (1 + xi l / sigma)^(-1/xi), survival of the depth
    if (std::fabs(p.xi) < kXiZeroTol) {
        surv = std::exp(-l / p.sigma_tilde);
    } else {
        const double z = 1.0 + p.xi * l / p.sigma_tilde;
        if (z <= 0.0) {
            if (clamped) ++*clamped;
            return cap;
        }
        surv = std::pow(z, -1.0 / p.xi);
    }
    const double denom = std::log1p(-p.zeta * surv);  // log(1 - zeta*surv) < 0
    const double v = -1.0 / denom;
    if (!(v < cap)) {
        if (clamped) ++*clamped;
        return cap;
    }
    return v;
}

/// Kolmogorov-Smirnov distance between the empirical CDF of a transformed
/// sample and the unit Fréchet CDF exp(-1/x).
inline double frechet_margin_ks(std::span<const double> transformed) {
    if (transformed.empty()) throw std::invalid_argument("frechet_margin_ks: empty sample");
    std::vector<double> s(transformed.begin(), transformed.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = std::exp(-1.0 / s[i]);
        ks = std::max(ks, std::max((i + 1.0) / n - F, F - static_cast<double>(i) / n));
    }
    return ks;
}

/// Pickands transform: r = -(x+y)/n, omega = x/(x+y).
inline PickandsPoint pickands_transform(const FrechetPair& f, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("pickands_transform: n must be >= 1");
    if (!(f.x_tilde > 0.0) || !(f.y_tilde > 0.0))
        throw std::domain_error("pickands_transform: components must be positive");
    const double nn = static_cast<double>(n);
    PickandsPoint pt;
    pt.r = -(f.x_tilde + f.y_tilde) / nn;
    pt.omega = f.x_tilde / (f.x_tilde + f.y_tilde);
    return pt;
}

/// Inverse Pickands transform: (x, y) = (-n r w, -n r (1-w)).
inline FrechetPair pickands_inverse(const PickandsPoint& pt, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("pickands_inverse: n must be >= 1");
    if (!(pt.r < 0.0)) throw std::domain_error("pickands_inverse: degenerate radial component");
    if (!(pt.omega > 0.0) || !(pt.omega < 1.0))
        throw std::domain_error("pickands_inverse: angular component on the boundary");
    const double nn = static_cast<double>(n);
    return {-nn * pt.r * pt.omega, -nn * pt.r * (1.0 - pt.omega), 0};
}

}  // namespace mevt
