#pragma once

// Conventional average-statistics baseline: marginal model selection by
// AIC/BIC (Gaussian on dBm, Rayleigh on linear amplitude), a moment-fitted
// bivariate Gaussian, and a tail-accurate bivariate normal CDF for
// extrapolating that model into the ultra-reliable region.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevt/joint.hpp"

namespace mevt {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / 1.4142135623730951); }

inline double normal_pdf(double z) {
    return 0.3989422804014327 * std::exp(-0.5 * z * z);
}

namespace detail {

// adaptive Simpson with absolute tolerance; integrands here are smooth
// Gaussian products, occasionally with one steep sigmoid
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

// core evaluation for h <= 0, k <= 0, |rho| < 1:
// Phi2(h,k) = integral_{-inf}^{h} pdf(t) Phi((k - rho t)/s) dt
inline double bvn_quadrant(double h, double k, double rho) {
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    const double lo = h - 13.0;
    auto f = [&](double t) { return normal_pdf(t) * normal_cdf((k - rho * t) / s); };
    const double fa = f(lo), fm = f(0.5 * (lo + h)), fb = f(h);
    return adaptive_simpson(f, lo, h, fa, fm, fb, 1e-14, 48);
}

}  // namespace detail

/// Bivariate standard normal CDF Pr(Z1 <= h, Z2 <= k) with correlation rho,
/// accurate to better than 1e-12 absolute including deep-tail arguments.
inline double bvn_cdf(double h, double k, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("bvn_cdf: |rho| must be <= 1");
    if (rho >= 1.0 - 1e-14) return normal_cdf(std::min(h, k));
    if (rho <= -1.0 + 1e-14) return std::max(0.0, normal_cdf(h) + normal_cdf(k) - 1.0);
    // fold into the h <= 0, k <= 0 quadrant where the integral is small
    if (h > 0.0 && k > 0.0)
        return normal_cdf(h) + normal_cdf(k) - 1.0 + bvn_cdf(-h, -k, rho);
    if (h > 0.0) return normal_cdf(k) - bvn_cdf(-h, k, -rho);
    if (k > 0.0) return normal_cdf(h) - bvn_cdf(h, -k, -rho);
    if (k < h) std::swap(h, k);  // integrate over the shorter tail
    const double v = detail::bvn_quadrant(h, k, rho);
    return std::max(0.0, std::min(1.0, v));
}

struct BivariateGaussian {
    double mu_x = 0.0, mu_y = 0.0;
    double sd_x = 1.0, sd_y = 1.0;
    double rho = 0.0;
    bool degenerate = false;  // |rho| at 1 within floating tolerance
};

/// Moment fit of the joint Gaussian model on paired dBm samples.
inline BivariateGaussian fit_bivariate_gaussian(std::span<const double> x,
                                                std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_bivariate_gaussian: need paired samples");
    const double n = static_cast<double>(x.size());
    BivariateGaussian g;
    for (std::size_t i = 0; i < x.size(); ++i) {
        g.mu_x += x[i];
        g.mu_y += y[i];
    }
    g.mu_x /= n;
    g.mu_y /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - g.mu_x) * (x[i] - g.mu_x);
        syy += (y[i] - g.mu_y) * (y[i] - g.mu_y);
        sxy += (x[i] - g.mu_x) * (y[i] - g.mu_y);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::domain_error("fit_bivariate_gaussian: degenerate variance");
    g.sd_x = std::sqrt(sxx / n);
    g.sd_y = std::sqrt(syy / n);
    g.rho = sxy / std::sqrt(sxx * syy);
    g.degenerate = std::fabs(g.rho) >= 1.0 - 1e-12;
    return g;
}

/// Model-implied joint CDF at (x, y) dBm, evaluated directly at deep-tail
/// arguments. This is the extrapolation: the average-statistics fit read
/// off in the ultra-reliable region.
inline double extrapolated_joint_cdf(const BivariateGaussian& g, double x, double y) {
    return bvn_cdf((x - g.mu_x) / g.sd_x, (y - g.mu_y) / g.sd_y, g.rho);
}

struct MarginCandidate {
    std::string name;
    std::vector<double> params;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

struct MarginRanking {
    std::vector<MarginCandidate> by_aic;  // best first
    bool tie = false;                     // top two within 2 AIC units
};

/// MLE fits of the candidate margins on a dBm sample, ranked by AIC.
/// Gaussian acts on the dBm values directly; the Rayleigh-family candidate
/// models the linear amplitude 10^(dBm/20) with the density mapped back to
/// the dBm axis so the criteria are comparable.
inline MarginRanking fit_margin_candidates(std::span<const double> samples) {
    if (samples.size() < 100)
        throw std::invalid_argument("fit_margin_candidates: need at least 100 samples");
    const double n = static_cast<double>(samples.size());

    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= n;
    if (!(var > 0.0)) throw std::domain_error("fit_margin_candidates: degenerate variance");

    MarginRanking out;
    {
        MarginCandidate c;
        c.name = "gaussian";
        c.params = {mean, std::sqrt(var)};
        c.loglik = -0.5 * n * (std::log(2.0 * 3.141592653589793 * var) + 1.0);
        c.aic = 2.0 * 2.0 - 2.0 * c.loglik;
        c.bic = 2.0 * std::log(n) - 2.0 * c.loglik;
        out.by_aic.push_back(c);
    }
    {
        // amplitude A = 10^(x/20); density on x gains the Jacobian A ln10/20
        const double c20 = std::log(10.0) / 20.0;
        double sum_a2 = 0.0, sum_ln_a = 0.0;
        for (double v : samples) {
            const double a = std::pow(10.0, v / 20.0);
            sum_a2 += a * a;
            sum_ln_a += c20 * v;  // ln A
        }
        const double s2 = sum_a2 / (2.0 * n);
        MarginCandidate c;
        c.name = "rayleigh";
        c.params = {std::sqrt(s2)};
        c.loglik = n * std::log(c20) + 2.0 * sum_ln_a - n * std::log(s2) - n;
        c.aic = 2.0 * 1.0 - 2.0 * c.loglik;
        c.bic = 1.0 * std::log(n) - 2.0 * c.loglik;
        out.by_aic.push_back(c);
    }
    std::sort(out.by_aic.begin(), out.by_aic.end(),
              [](const MarginCandidate& a, const MarginCandidate& b) { return a.aic < b.aic; });
    out.tie = std::fabs(out.by_aic[0].aic - out.by_aic[1].aic) < 2.0;
    return out;
}

}  // namespace mevt
