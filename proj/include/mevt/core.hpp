#pragma once

// Domain types and closed-form GEV/GPD math for lower-tail (deep-fade)
// modeling of received-power traces. All tail formulas operate on
// nonnegative exceedance depths l = u - X (dB below the threshold u);
// conversion to/from dBm happens at module boundaries.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mevt {

inline constexpr double kXiZeroTol = 1e-8;  // switch to Gumbel/exponential limit
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// One received-power trace: (time step, power in dBm) samples at a fixed
/// time resolution. Indices must be strictly increasing, powers finite.
struct PowerSeries {
    std::vector<std::int64_t> t;
    std::vector<double> dbm;
    double resolution_s = 1.0;

    std::size_t size() const { return dbm.size(); }

    void validate() const {
        if (t.size() != dbm.size())
            throw std::invalid_argument("PowerSeries: index/value length mismatch");
        for (std::size_t i = 0; i < dbm.size(); ++i) {
            if (!std::isfinite(dbm[i]))
                throw std::invalid_argument("PowerSeries: non-finite power at row " +
                                            std::to_string(i));
            if (i > 0 && t[i] <= t[i - 1])
                throw std::invalid_argument("PowerSeries: indices not strictly increasing at row " +
                                            std::to_string(i));
        }
    }
};

struct GevParams {
    double mu = 0.0;     // location (dBm)
    double sigma = 1.0;  // scale > 0
    double xi = 0.0;     // shape

    void validate() const {
        if (!(sigma > 0.0)) throw std::invalid_argument("GevParams: sigma must be > 0");
    }
};

/// Fitted univariate tail model. `u` is the threshold in dBm, `zeta` the
/// marginal probability Pr(X < u). For xi < 0 the depth support is the
/// finite interval [0, -sigma_tilde/xi].
struct GpdParams {
    double xi = 0.0;
    double sigma_tilde = 1.0;
    double u = 0.0;
    double zeta = 0.5;

    void validate() const {
        if (!(sigma_tilde > 0.0))
            throw std::invalid_argument("GpdParams: sigma_tilde must be > 0");
        if (!(zeta > 0.0 && zeta < 1.0))
            throw std::invalid_argument("GpdParams: zeta must lie in (0,1)");
        if (xi < 0.0 && !(-sigma_tilde / xi > 0.0))
            throw std::invalid_argument("GpdParams: implied endpoint not positive");
    }
};

/// Exceedance depth l = u - X >= 0 at the time step of the cluster minimum.
struct Exceedance {
    double l = 0.0;
    std::int64_t t = 0;
};

/// GEV CDF, Eq.-(1) form. Out-of-support z returns the boundary value of
/// the appropriate tail side, never NaN.
inline double gev_cdf(double z, const GevParams& p) {
    p.validate();
    const double s = (z - p.mu) / p.sigma;
    if (std::fabs(p.xi) < kXiZeroTol)
        return std::exp(-std::exp(-s));
    const double brk = 1.0 + p.xi * s;
    if (brk <= 0.0) return p.xi > 0.0 ? 0.0 : 1.0;  // below/above finite endpoint
    return std::exp(-std::pow(brk, -1.0 / p.xi));
}

/// GPD CDF of an exceedance depth l >= 0. Exactly 1 at and beyond the
/// finite endpoint when xi < 0.
inline double gpd_cdf(double l, const GpdParams& p) {
    p.validate();
    if (!(l >= 0.0)) throw std::domain_error("gpd_cdf: depth must be >= 0");
    if (std::fabs(p.xi) < kXiZeroTol)
        return -std::expm1(-l / p.sigma_tilde);
    const double z = 1.0 + p.xi * l / p.sigma_tilde;
    if (z <= 0.0) return 1.0;  // xi < 0, depth at/beyond -sigma_tilde/xi
    return -std::expm1(std::log(z) * (-1.0 / p.xi));
}

/// Inverse of gpd_cdf on [0, 1).
inline double gpd_quantile(double pr, const GpdParams& p) {
    p.validate();
    if (!(pr >= 0.0 && pr < 1.0))
        throw std::domain_error("gpd_quantile: probability must lie in [0,1)");
    if (std::fabs(p.xi) < kXiZeroTol)
        return -p.sigma_tilde * std::log1p(-pr);
    // l = sigma/xi * ((1-pr)^(-xi) - 1)
    return p.sigma_tilde / p.xi * std::expm1(-p.xi * std::log1p(-pr));
}

/// Depth at which the fitted tail ends: -sigma_tilde/xi for xi < 0, else +inf.
inline double gpd_support_endpoint(const GpdParams& p) {
    p.validate();
    return p.xi < 0.0 ? -p.sigma_tilde / p.xi : kInf;
}

/// Log-likelihood of depths under GPD(xi, sigma_tilde); -inf when any depth
/// violates 1 + xi*l/sigma > 0.
inline double gpd_log_likelihood(std::span<const double> excesses, double xi,
                                 double sigma_tilde) {
    if (excesses.empty())
        throw std::domain_error("gpd_log_likelihood: empty excess sequence");
    if (!(sigma_tilde > 0.0))
        throw std::domain_error("gpd_log_likelihood: sigma_tilde must be > 0");
    const double n = static_cast<double>(excesses.size());
    const double logs = std::log(sigma_tilde);
    if (std::fabs(xi) < kXiZeroTol) {
        double sum = 0.0;
        for (double l : excesses) {
            if (!(l >= 0.0)) throw std::domain_error("gpd_log_likelihood: negative depth");
            sum += l;
        }
        return -n * logs - sum / sigma_tilde;
    }
    double acc = 0.0;
    for (double l : excesses) {
        if (!(l >= 0.0)) throw std::domain_error("gpd_log_likelihood: negative depth");
        const double z = 1.0 + xi * l / sigma_tilde;
        if (z <= 0.0) return -kInf;
        acc += std::log(z);
    }
    return -n * logs - (1.0 + 1.0 / xi) * acc;
}

}  // namespace mevt
