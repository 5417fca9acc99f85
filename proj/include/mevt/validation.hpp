#pragma once

// Validity checks for the fitted bivariate tail models: selection of the
// radial cut-off r0 from the r-omega correlation profile, conditional
// uniformity of the radial component, the Pickands density of the logistic
// model with its normalized angular density and mean, the 0.5 mean
// constraint, and RMSE scoring of joint-CDF surfaces.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevt/logistic.hpp"
#include "mevt/poisson.hpp"
#include "mevt/transforms.hpp"

namespace mevt {

struct R0ProfileEntry {
    double r0 = 0.0;
    double corr = 0.0;
    std::size_t retained = 0;
};

struct R0Selection {
    bool found = false;
    double r0 = 0.0;
    double corr_at_r0 = 0.0;
    std::vector<R0ProfileEntry> profile;
};

/// Scan candidate cut-offs over the empirical radial quantiles (1% steps)
/// and return the most negative r0 with |corr(r, omega | r > r0)| below the
/// critical value. The full profile is returned for the r-omega plot.
inline R0Selection select_r0(std::span<const PickandsPoint> points, double critical) {
    if (points.size() < 100)
        throw std::invalid_argument("select_r0: need at least 100 points");
    if (!(critical > 0.0 && critical < 1.0))
        throw std::invalid_argument("select_r0: critical value must lie in (0,1)");

    std::vector<double> rs(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) rs[i] = points[i].r;
    std::sort(rs.begin(), rs.end());

    R0Selection sel;
    for (int pct = 1; pct <= 99; ++pct) {
        const double q = static_cast<double>(pct) / 100.0;
        const double pos = q * static_cast<double>(rs.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        const double cand =
            lo + 1 < rs.size() ? rs[lo] * (1.0 - frac) + rs[lo + 1] * frac : rs[lo];

        double sr = 0.0, sw = 0.0, srr = 0.0, sww = 0.0, srw = 0.0;
        std::size_t k = 0;
        for (const auto& p : points)
            if (p.r > cand) {
                sr += p.r;
                sw += p.omega;
                ++k;
            }
        if (k < 30) continue;
        const double mr = sr / static_cast<double>(k), mw = sw / static_cast<double>(k);
        for (const auto& p : points)
            if (p.r > cand) {
                srr += (p.r - mr) * (p.r - mr);
                sww += (p.omega - mw) * (p.omega - mw);
                srw += (p.r - mr) * (p.omega - mw);
            }
        if (srr == 0.0 || sww == 0.0) continue;
        const double corr = srw / std::sqrt(srr * sww);
        sel.profile.push_back({cand, corr, k});
        if (!sel.found && std::fabs(corr) < critical) {
            sel.found = true;
            sel.r0 = cand;
            sel.corr_at_r0 = corr;
        }
    }
    return sel;
}

struct UniformityResult {
    double max_deviation = 1.0;
    double tolerance = 0.0;
    std::size_t retained = 0;
    bool pass = false;
};

/// Compare the empirical conditional law of r given r > r0 against the
/// uniform model Pr(r >= R | r > r0) = R/r0 on [r0, 0]. Pass iff the KS
/// distance stays below the tolerance (default 1.36/sqrt(k)).
inline UniformityResult radial_uniformity(std::span<const PickandsPoint> points, double r0,
                                          double tolerance = 0.0) {
    std::vector<double> kept;
    for (const auto& p : points)
        if (p.r > r0) kept.push_back(p.r);
    if (kept.size() < 30)
        throw std::invalid_argument("radial_uniformity: fewer than 30 points above r0");
    std::sort(kept.begin(), kept.end());
    const double n = static_cast<double>(kept.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        const double F = 1.0 - kept[i] / r0;  // model CDF of r on (r0, 0)
        ks = std::max(ks, std::max((i + 1.0) / n - F, F - static_cast<double>(i) / n));
    }
    UniformityResult res;
    res.max_deviation = ks;
    res.retained = kept.size();
    res.tolerance = tolerance > 0.0 ? tolerance : 1.36 / std::sqrt(n);
    res.pass = ks < res.tolerance;
    return res;
}

/// Pickands density phi(omega) = |r| * (d2 G_l / dx dy)(T_P^{-1}(omega, r))
/// of the logistic model, evaluated at an observed (omega, r) pair.
inline double pickands_density_logistic(double omega, double r, const LogisticModel& m,
                                        std::int64_t n) {
    if (!(omega > 0.0) || !(omega < 1.0))
        throw std::domain_error("pickands_density_logistic: omega on the boundary");
    if (!(r < 0.0)) throw std::domain_error("pickands_density_logistic: r must be negative");
    const FrechetPair f = pickands_inverse({omega, r}, n);
    return std::fabs(r) * std::exp(logistic_log_density(f.x_tilde, f.y_tilde, m.alpha));
}

struct HlDensity {
    std::vector<double> omega;    // grid on [0,1]
    std::vector<double> density;  // normalized so Simpson integral is 1
    double mean = 0.5;            // integral of omega * h(omega)
    double mu = 0.0;              // normalizer, integral of the raw phi aggregate
    double cv_phi = 0.0;          // median CV of phi across r within omega bins
};

namespace detail {

inline double simpson(std::span<const double> v, double h) {
    // composite Simpson; grid sizes here are odd (2001 nodes)
    double s = v.front() + v.back();
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * v[i];
    return s * h / 3.0;
}

}  // namespace detail

/// Evaluate phi at the observed Pickands points above r0, aggregate onto an
/// equispaced omega grid (nearest-node averages), and normalize by
/// mu = integral of phi. Also reports the spread of phi across r at fixed
/// omega as an r-independence diagnostic.
inline HlDensity h_l_density(std::span<const PickandsPoint> points, double r0,
                             const LogisticModel& m, std::int64_t n,
                             std::size_t grid_size = 2001) {
    if (grid_size < 5 || grid_size % 2 == 0)
        throw std::invalid_argument("h_l_density: grid size must be odd and >= 5");
    std::vector<double> acc(grid_size, 0.0);
    std::vector<std::size_t> cnt(grid_size, 0);
    constexpr std::size_t kCvBins = 20;
    std::vector<std::vector<double>> bins(kCvBins);

    std::size_t used = 0;
    for (const auto& p : points) {
        if (!(p.r > r0) || !(p.omega > 0.0) || !(p.omega < 1.0)) continue;
        const double phi = pickands_density_logistic(p.omega, p.r, m, n);
        const auto node = static_cast<std::size_t>(
            std::lround(p.omega * static_cast<double>(grid_size - 1)));
        acc[node] += phi;
        ++cnt[node];
        ++used;
        auto b = static_cast<std::size_t>(p.omega * kCvBins);
        if (b >= kCvBins) b = kCvBins - 1;
        bins[b].push_back(phi);
    }
    if (used < 30) throw std::invalid_argument("h_l_density: fewer than 30 usable points");

    HlDensity out;
    out.omega.resize(grid_size);
    out.density.resize(grid_size);
    const double dw = 1.0 / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        out.omega[i] = static_cast<double>(i) * dw;
        out.density[i] = cnt[i] > 0 ? acc[i] / static_cast<double>(cnt[i]) : 0.0;
    }
    out.mu = detail::simpson(out.density, dw);
    if (!(out.mu > 0.0)) throw std::domain_error("h_l_density: nonpositive normalizer");
    for (auto& d : out.density) d /= out.mu;
    std::vector<double> wh(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) wh[i] = out.omega[i] * out.density[i];
    out.mean = detail::simpson(wh, dw);

    std::vector<double> cvs;
    for (const auto& b : bins) {
        if (b.size() < 5) continue;
        double mbin = 0.0;
        for (double v : b) mbin += v;
        mbin /= static_cast<double>(b.size());
        if (mbin <= 0.0) continue;
        double vv = 0.0;
        for (double v : b) vv += (v - mbin) * (v - mbin);
        cvs.push_back(std::sqrt(vv / static_cast<double>(b.size())) / mbin);
    }
    if (!cvs.empty()) {
        std::sort(cvs.begin(), cvs.end());
        out.cv_phi = cvs[cvs.size() / 2];
    }
    return out;
}

struct MeanConstraintResult {
    bool pass = false;
    double mean = 0.5;
    double margin = 0.0;  // tol - |mean - 0.5|
};

/// Pass iff |mean - 0.5| <= tol.
inline MeanConstraintResult mean_constraint_check(double mean, double tol = 0.05) {
    if (!(mean >= 0.0 && mean <= 1.0))
        throw std::invalid_argument("mean_constraint_check: mean must lie in [0,1]");
    MeanConstraintResult r;
    r.mean = mean;
    r.margin = tol - std::fabs(mean - 0.5);
    r.pass = r.margin >= 0.0;
    return r;
}

/// Root-mean-square pointwise difference of two surfaces on identical grids.
inline double rmse_joint_cdf(std::span<const double> model, std::span<const double> empirical) {
    if (model.size() != empirical.size() || model.empty())
        throw std::invalid_argument("rmse_joint_cdf: grid mismatch");
    double ss = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double d = model[i] - empirical[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(model.size()));
}

}  // namespace mevt
