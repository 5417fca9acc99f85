#pragma once

// Logistic-family bivariate extreme value model on the Fréchet scale:
// V(x,y) = (x^(-1/a) + y^(-1/a))^a with dependency factor a in (0,1],
// a -> 1 independence, a -> 0 complete dependence. Everything is evaluated
// in log space so small a and large Fréchet values stay finite.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mevt/core.hpp"
#include "mevt/detail/optim.hpp"
#include "mevt/transforms.hpp"

namespace mevt {

enum class AlphaFitMethod { FromRho, MLE };

/// Likelihood used by fit_alpha_mle: the full bivariate extreme value
/// density G*(Vx*Vy - Vxy), or the bare exponent-measure mixed partial
/// |d2V/dxdy| (the tail-intensity form). On joint tail samples the two
/// agree; the full density is the default.
enum class LogisticLikelihood { FullDensity, MixedPartialOnly };

struct LogisticModel {
    double alpha = 0.5;
    AlphaFitMethod method = AlphaFitMethod::FromRho;
    LogisticLikelihood likelihood = LogisticLikelihood::FullDensity;
    double loglik = 0.0;       // only meaningful for MLE fits
    bool boundary = false;     // independence / complete-dependence edge
    bool converged = true;
};

/// a = sqrt(1 - rho), from the logistic-family identity rho = 1 - a^2.
/// rho = 0 returns the independence boundary a = 1 with the boundary flag.
inline LogisticModel alpha_from_rho(double rho) {
    if (rho < 0.0)
        throw std::invalid_argument(
            "alpha_from_rho: negative correlation; the logistic family only represents "
            "positive association");
    if (rho >= 1.0)
        throw std::domain_error("alpha_from_rho: rho >= 1 is degenerate (complete dependence)");
    LogisticModel m;
    m.alpha = std::sqrt(1.0 - rho);
    m.method = AlphaFitMethod::FromRho;
    m.boundary = (rho == 0.0);
    return m;
}

namespace detail {

// log-sum-exp of the two scaled negative logs: returns lse with
// exp(alpha*lse) = V(x,y,alpha).
inline double v_logistic_lse(double x, double y, double alpha) {
    const double a = -std::log(x) / alpha;
    const double b = -std::log(y) / alpha;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace detail

/// Exponent measure V(x,y) = (x^(-1/a) + y^(-1/a))^a.
inline double v_logistic(double x_tilde, double y_tilde, double alpha) {
    if (!(x_tilde > 0.0) || !(y_tilde > 0.0))
        throw std::domain_error("v_logistic: arguments must be positive");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("v_logistic: alpha must lie in (0,1]");
    if (alpha == 1.0) return 1.0 / x_tilde + 1.0 / y_tilde;
    return std::exp(alpha * detail::v_logistic_lse(x_tilde, y_tilde, alpha));
}

/// Joint CDF G(x,y) = exp(-V(x,y)).
inline double g_logistic(double x_tilde, double y_tilde, const LogisticModel& m) {
    return std::exp(-v_logistic(x_tilde, y_tilde, m.alpha));
}

/// Closed-form mixed partial d2V/dx dy = ((a-1)/a) S^(a-2) (xy)^(-1/a-1);
/// negative for 0 < a < 1, identically zero at independence.
inline double logistic_mixed_partial(double x_tilde, double y_tilde, double alpha) {
    if (!(x_tilde > 0.0) || !(y_tilde > 0.0))
        throw std::domain_error("logistic_mixed_partial: arguments must be positive");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("logistic_mixed_partial: alpha must lie in (0,1]");
    if (alpha == 1.0) return 0.0;
    const double lse = detail::v_logistic_lse(x_tilde, y_tilde, alpha);
    const double lxy = std::log(x_tilde) + std::log(y_tilde);
    return (alpha - 1.0) / alpha *
           std::exp((alpha - 2.0) * lse - (1.0 / alpha + 1.0) * lxy);
}

/// Log of the full bivariate extreme value density G*(Vx*Vy - Vxy).
inline double logistic_log_density(double x_tilde, double y_tilde, double alpha) {
    if (alpha == 1.0) {
        const double V = 1.0 / x_tilde + 1.0 / y_tilde;
        return -V - 2.0 * (std::log(x_tilde) + std::log(y_tilde));
    }
    const double lse = detail::v_logistic_lse(x_tilde, y_tilde, alpha);
    const double V = std::exp(alpha * lse);
    const double lxy = std::log(x_tilde) + std::log(y_tilde);
    // Vx*Vy - Vxy = exp((a-2)lse - (1/a+1)lxy) * (V + (1-a)/a)
    return -V - (1.0 / alpha + 1.0) * lxy + (alpha - 2.0) * lse +
           std::log(V + (1.0 - alpha) / alpha);
}

/// MLE of the dependency factor over a in (0,1) by bounded scalar search.
/// An optimum within 0.05 of either end is flagged as a boundary fit.
inline LogisticModel fit_alpha_mle(std::span<const FrechetPair> pairs,
                                   LogisticLikelihood lik = LogisticLikelihood::FullDensity) {
    if (pairs.size() < 30)
        throw std::invalid_argument("fit_alpha_mle: need at least 30 pairs, got " +
                                    std::to_string(pairs.size()));
    for (const auto& p : pairs)
        if (!(p.x_tilde > 0.0) || !(p.y_tilde > 0.0))
            throw std::invalid_argument("fit_alpha_mle: nonpositive pair component");

    auto nll = [&](double a) {
        double acc = 0.0;
        if (lik == LogisticLikelihood::FullDensity) {
            for (const auto& p : pairs) acc += logistic_log_density(p.x_tilde, p.y_tilde, a);
        } else {
            for (const auto& p : pairs) {
                const double v = -logistic_mixed_partial(p.x_tilde, p.y_tilde, a);
                if (!(v > 0.0)) return kInf;
                acc += std::log(v);
            }
        }
        return -acc;
    };
    const auto r = detail::brent_min(nll, 1e-4, 1.0 - 1e-4, 1e-6);

    LogisticModel m;
    m.alpha = r.x;
    m.method = AlphaFitMethod::MLE;
    m.likelihood = lik;
    m.loglik = -r.fx;
    m.converged = r.converged;
    m.boundary = (r.x >= 0.95 || r.x <= 0.05);
    return m;
}

/// Angular (spectral) density of the logistic family on (0,1); integrates
/// to 1 and is symmetric about 1/2 for every a in (0,1).
inline double logistic_angular_density(double omega, double alpha) {
    if (!(omega > 0.0) || !(omega < 1.0))
        throw std::domain_error("logistic_angular_density: omega must lie in (0,1)");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("logistic_angular_density: alpha must lie in (0,1)");
    const double a = -std::log(omega) / alpha;
    const double b = -std::log1p(-omega) / alpha;
    const double m = std::max(a, b);
    const double lse = m + std::log1p(std::exp(std::min(a, b) - m));
    return 0.5 * (1.0 / alpha - 1.0) *
           std::exp((-1.0 - 1.0 / alpha) * (std::log(omega) + std::log1p(-omega)) +
                    (alpha - 2.0) * lse);
}

}  // namespace mevt
