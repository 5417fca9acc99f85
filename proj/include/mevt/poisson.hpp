#pragma once

// Poisson-point-process route to the bivariate tail: an empirical discrete
// angular measure on [0,1] estimated from Pickands points, the induced
// exponent measure Lambda(A) = 2 * sum_j m_j * max(w_j/x, (1-w_j)/y) on the
// positive Fréchet scale, and the resulting joint CDF exp(-Lambda).

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevt/logistic.hpp"
#include "mevt/transforms.hpp"

namespace mevt {

struct AngularAtom {
    double omega = 0.5;
    double mass = 1.0;
};

struct AngularMeasure {
    std::vector<AngularAtom> atoms;  // masses sum to 1
    double r0 = 0.0;                 // radial cut-off used to pool the points
    bool symmetrized = false;

    // mirrored atoms pair (w, 1-w) at equal mass, so the symmetrized mean
    // is 1/2 by construction rather than by floating-point summation
    double mean() const {
        if (symmetrized) return 0.5;
        double m = 0.0;
        for (const auto& a : atoms) m += a.omega * a.mass;
        return m;
    }

    double numeric_mean() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.omega * a.mass;
        return m;
    }
};

/// Discrete angular measure with equal mass on each retained angle
/// (points with r > r0). With `symmetrize`, every atom is mirrored about
/// 1/2 at half mass, making the mean exactly 1/2.
inline AngularMeasure estimate_angular_measure(std::span<const PickandsPoint> points,
                                               double r0, bool symmetrize) {
    std::vector<double> kept;
    for (const auto& p : points)
        if (p.r > r0) kept.push_back(p.omega);
    if (kept.size() < 30)
        throw std::invalid_argument("estimate_angular_measure: only " +
                                    std::to_string(kept.size()) +
                                    " points retained above the radial cut-off (need 30)");
    AngularMeasure H;
    H.r0 = r0;
    H.symmetrized = symmetrize;
    const double m = 1.0 / static_cast<double>(kept.size());
    if (symmetrize) {
        H.atoms.reserve(2 * kept.size());
        for (double w : kept) {
            H.atoms.push_back({w, 0.5 * m});
            H.atoms.push_back({1.0 - w, 0.5 * m});
        }
    } else {
        H.atoms.reserve(kept.size());
        for (double w : kept) H.atoms.push_back({w, m});
    }
    return H;
}

/// Lambda(A) for the exceedance region beyond (x,y):
/// 2 * sum_j mass_j * max(omega_j/x, (1-omega_j)/y).
inline double exponent_measure(double x_tilde, double y_tilde, const AngularMeasure& H) {
    if (!(x_tilde > 0.0) || !(y_tilde > 0.0))
        throw std::domain_error("exponent_measure: arguments must be positive");
    double acc = 0.0;
    for (const auto& a : H.atoms)
        acc += a.mass * std::max(a.omega / x_tilde, (1.0 - a.omega) / y_tilde);
    return 2.0 * acc;
}

/// Joint tail CDF exp(-Lambda(A)); nondecreasing in each argument.
inline double g_poisson(double x_tilde, double y_tilde, const AngularMeasure& H) {
    return std::exp(-exponent_measure(x_tilde, y_tilde, H));
}

/// Point-process intensity 2/r^2 times a kernel-smoothed angular density.
/// The smoothing (triangular kernel) exists for plotting only; CDF math
/// uses the discrete atoms exactly.
inline double intensity_density(double r, double omega, const AngularMeasure& H,
                                double bandwidth = 0.05) {
    if (r == 0.0) throw std::domain_error("intensity_density: singular at r = 0");
    double dens = 0.0;
    for (const auto& a : H.atoms) {
        const double d = std::fabs(omega - a.omega);
        if (d < bandwidth) dens += a.mass * (1.0 - d / bandwidth) / bandwidth;
    }
    return 2.0 / (r * r) * dens;
}

/// Midpoint-rule discretization of the logistic angular density on an
/// equispaced grid, masses normalized to 1. The density diverges (but stays
/// integrable) at the endpoints for alpha > 1/2, so cell midpoints avoid
/// evaluating on the boundary. Used to cross-check the point-process
/// exponent measure against the closed-form V.
inline AngularMeasure discretize_logistic_angular(double alpha, std::size_t grid_size = 2001) {
    if (grid_size < 3) throw std::invalid_argument("discretize_logistic_angular: grid too small");
    AngularMeasure H;
    H.symmetrized = true;
    const double dw = 1.0 / static_cast<double>(grid_size);
    double total = 0.0;
    H.atoms.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double w = (static_cast<double>(i) + 0.5) * dw;
        const double mass = logistic_angular_density(w, alpha) * dw;
        H.atoms.push_back({w, mass});
        total += mass;
    }
    for (auto& a : H.atoms) a.mass /= total;
    return H;
}

}  // namespace mevt
