#pragma once

// Maximum-likelihood GPD fitting on exceedance depths plus the PP/QQ
// goodness-of-fit diagnostics. The optimizer works on (xi, log sigma) so
// the scale stays positive; proposals violating 1 + xi*l/sigma > 0 are
// rejected by the line search before any gradient is taken there.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mevt/core.hpp"
#include "mevt/detail/optim.hpp"

namespace mevt {

struct GpdFit {
    double xi = 0.0;
    double sigma_tilde = 1.0;
    double se_xi = 0.0;
    double se_sigma = 0.0;
    double cov_xi_sigma = 0.0;  // off-diagonal of the observed-information inverse
    double loglik = -kInf;
    double grad_norm = kInf;
    int iterations = 0;
    bool converged = false;
    std::string method = "bfgs";
};

namespace detail {

struct GpdNll {
    std::span<const double> l;

    double value(double xi, double t) const {
        const double n = static_cast<double>(l.size());
        const double inv_s = std::exp(-t);
        if (std::fabs(xi) < kXiZeroTol) {
            double sum = 0.0;
            for (double li : l) sum += li;
            return n * t + sum * inv_s;
        }
        double acc = 0.0;
        for (double li : l) {
            const double z = 1.0 + xi * li * inv_s;
            if (z <= 0.0) return kInf;
            acc += std::log(z);
        }
        return n * t + (1.0 + 1.0 / xi) * acc;
    }

    double value_grad(const Vec2& p, Vec2& g) const {
        const double xi = p[0], t = p[1];
        const double n = static_cast<double>(l.size());
        const double inv_s = std::exp(-t);
        if (std::fabs(xi) < kXiZeroTol) {
            double sw = 0.0, sw2 = 0.0;
            for (double li : l) {
                const double w = li * inv_s;
                sw += w;
                sw2 += w * w;
            }
            g[0] = sw - 0.5 * sw2;  // limit of the shape derivative at xi = 0
            g[1] = n - sw;
            return n * t + sw;
        }
        double slog = 0.0, srat = 0.0;
        for (double li : l) {
            const double w = li * inv_s;
            const double z = 1.0 + xi * w;
            if (z <= 0.0) return kInf;
            slog += std::log(z);
            srat += w / z;
        }
        g[0] = -slog / (xi * xi) + (1.0 + 1.0 / xi) * srat;
        g[1] = n - (1.0 + xi) * srat;
        return n * t + (1.0 + 1.0 / xi) * slog;
    }
};

}  // namespace detail

/// Fit GPD(xi, sigma) to depths by MLE. Quasi-Newton on (xi, log sigma)
/// seeded from the moment estimator, with a simplex fallback when the
/// quasi-Newton path stalls. Standard errors come from the inverse of the
/// finite-difference observed information at the optimum.
inline GpdFit fit_gpd_mle(std::span<const double> excesses) {
    if (excesses.size() < 30)
        throw std::invalid_argument("fit_gpd_mle: need at least 30 excesses, got " +
                                    std::to_string(excesses.size()));
    double mean = 0.0, mn = kInf, mx = -kInf;
    for (double l : excesses) {
        if (!(l >= 0.0)) throw std::invalid_argument("fit_gpd_mle: negative depth");
        mean += l;
        mn = std::min(mn, l);
        mx = std::max(mx, l);
    }
    mean /= static_cast<double>(excesses.size());
    if (!(mx > mn))
        throw std::invalid_argument("fit_gpd_mle: degenerate sample (all depths equal)");
    double var = 0.0;
    for (double l : excesses) var += (l - mean) * (l - mean);
    var /= static_cast<double>(excesses.size());

    const detail::GpdNll nll{excesses};
    auto fg = [&](const detail::Vec2& p, detail::Vec2& g) { return nll.value_grad(p, g); };

    // gradient tolerance per observation: the likelihood and its gradient
    // scale with the sample size
    const double grad_tol = 1e-8 * static_cast<double>(excesses.size());

    // moment (Hosking-Wallis) seed plus an exponential-shaped fallback
    const double ratio = mean * mean / var;
    std::vector<detail::Vec2> seeds;
    seeds.push_back({0.5 * (1.0 - ratio),
                     std::log(std::max(0.5 * mean * (ratio + 1.0), 1e-12))});
    seeds.push_back({0.0, std::log(mean)});

    detail::MinResult2 best;
    for (const auto& s : seeds) {
        auto r = detail::bfgs2(fg, s, 500, 1e-10, grad_tol);
        if (r.fx < best.fx) best = r;
    }
    bool used_simplex = false;
    if (!best.converged) {
        auto r = detail::nelder_mead2([&](const detail::Vec2& p) { return nll.value(p[0], p[1]); },
                                      best.iterations > 0 ? best.x : seeds[0]);
        if (r.fx <= best.fx) {
            // polish with a short quasi-Newton run from the simplex optimum
            auto r2 = detail::bfgs2(fg, r.x, 200, 1e-10, grad_tol);
            best = (r2.fx <= r.fx) ? r2 : detail::MinResult2{r.x, r.fx, r.grad_norm,
                                                             r.iterations, r.converged};
            used_simplex = true;
        }
    }

    GpdFit fit;
    fit.xi = best.x[0];
    fit.sigma_tilde = std::exp(best.x[1]);
    fit.loglik = -best.fx;
    fit.grad_norm = best.grad_norm;
    fit.iterations = best.iterations;
    fit.converged = best.converged;
    fit.method = used_simplex ? "bfgs+simplex" : "bfgs";

    // observed information on (xi, sigma) via central differences of the NLL
    const double s_hat = fit.sigma_tilde;
    auto nll_xs = [&](double xi, double s) {
        if (!(s > 0.0)) return kInf;
        return nll.value(xi, std::log(s));
    };
    const double hx = 1e-5 * std::max(std::fabs(fit.xi), 1e-2);
    const double hs = 1e-5 * s_hat;
    const double f0 = nll_xs(fit.xi, s_hat);
    const double fpp = nll_xs(fit.xi + hx, s_hat + hs);
    const double fpm = nll_xs(fit.xi + hx, s_hat - hs);
    const double fmp = nll_xs(fit.xi - hx, s_hat + hs);
    const double fmm = nll_xs(fit.xi - hx, s_hat - hs);
    const double fxp = nll_xs(fit.xi + hx, s_hat);
    const double fxm = nll_xs(fit.xi - hx, s_hat);
    const double fsp = nll_xs(fit.xi, s_hat + hs);
    const double fsm = nll_xs(fit.xi, s_hat - hs);
    const double h11 = (fxp - 2.0 * f0 + fxm) / (hx * hx);
    const double h22 = (fsp - 2.0 * f0 + fsm) / (hs * hs);
    const double h12 = (fpp - fpm - fmp + fmm) / (4.0 * hx * hs);
    const double det = h11 * h22 - h12 * h12;
    if (std::isfinite(det) && det > 0.0 && h11 > 0.0) {
        fit.se_xi = std::sqrt(h22 / det);
        fit.se_sigma = std::sqrt(h11 / det);
        fit.cov_xi_sigma = -h12 / det;
    }
    return fit;
}

/// (empirical prob, model prob) pairs with plotting positions i/(n+1).
inline std::vector<std::pair<double, double>> pp_points(std::span<const double> excesses,
                                                        const GpdParams& p) {
    std::vector<double> sorted(excesses.begin(), excesses.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out.emplace_back((i + 1.0) / (n + 1.0), gpd_cdf(sorted[i], p));
    return out;
}

/// (model quantile, empirical quantile) pairs, mirroring pp_points.
inline std::vector<std::pair<double, double>> qq_points(std::span<const double> excesses,
                                                        const GpdParams& p) {
    std::vector<double> sorted(excesses.begin(), excesses.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        out.emplace_back(gpd_quantile((i + 1.0) / (n + 1.0), p), sorted[i]);
    return out;
}

/// Vertical deviation of plot points from the unit diagonal:
/// (max |y - x|, RMSE of y - x).
inline std::pair<double, double> diagonal_deviation(
    const std::vector<std::pair<double, double>>& points) {
    if (points.empty()) throw std::invalid_argument("diagonal_deviation: empty input");
    double mx = 0.0, ss = 0.0;
    for (const auto& [x, y] : points) {
        const double d = y - x;
        mx = std::max(mx, std::fabs(d));
        ss += d * d;
    }
    return {mx, std::sqrt(ss / static_cast<double>(points.size()))};
}

}  // namespace mevt
