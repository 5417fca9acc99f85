#pragma once

// Small numerical-optimization kit shared by the fitting modules: bounded
// scalar minimization (Brent), a 2-d BFGS with backtracking line search,
// and a 2-d Nelder-Mead fallback. Objectives may return +inf outside their
// feasible region; line searches treat that as a rejected step.

#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace mevt::detail {

struct ScalarMinResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Brent's method on [a, b]. `tol` is an absolute x tolerance.
inline ScalarMinResult brent_min(const std::function<double(double)>& f, double a,
                                 double b, double tol = 1e-8, int max_iter = 200) {
    const double gold = 0.3819660112501051;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    ScalarMinResult res;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol + 1e-12 * std::fabs(x);
        const double tol2 = 2.0 * tol1;
        res.iterations = it + 1;
        if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
            res.converged = true;
            break;
        }
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double e_old = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        const double u = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    res.x = x;
    res.fx = fx;
    return res;
}

using Vec2 = std::array<double, 2>;

struct MinResult2 {
    Vec2 x{0.0, 0.0};
    double fx = std::numeric_limits<double>::infinity();
    double grad_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// BFGS in two dimensions with Armijo backtracking. `fg` returns the
/// objective and fills the gradient; it must return +inf (gradient ignored)
/// outside the feasible set.
inline MinResult2 bfgs2(const std::function<double(const Vec2&, Vec2&)>& fg, Vec2 x0,
                        int max_iter = 500, double step_tol = 1e-10,
                        double grad_tol = 1e-8) {
    MinResult2 res;
    Vec2 g{0.0, 0.0};
    double fx = fg(x0, g);
    if (!std::isfinite(fx)) return res;
    // inverse Hessian approximation, start from identity
    double h00 = 1.0, h01 = 0.0, h11 = 1.0;
    Vec2 x = x0;
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        const double gn = std::hypot(g[0], g[1]);
        res.grad_norm = gn;
        if (gn < grad_tol) {
            res.converged = true;
            break;
        }
        Vec2 p{-(h00 * g[0] + h01 * g[1]), -(h01 * g[0] + h11 * g[1])};
        double descent = p[0] * g[0] + p[1] * g[1];
        if (descent >= 0.0) {  // reset curvature if not a descent direction
            h00 = h11 = 1.0; h01 = 0.0;
            p = {-g[0], -g[1]};
            descent = -gn * gn;
        }
        double step = 1.0;
        Vec2 xn, gn2{0.0, 0.0};
        double fn = std::numeric_limits<double>::infinity();
        bool ok = false;
        for (int ls = 0; ls < 60; ++ls) {
            xn = {x[0] + step * p[0], x[1] + step * p[1]};
            fn = fg(xn, gn2);
            if (std::isfinite(fn) && fn <= fx + 1e-4 * step * descent) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
        const Vec2 s{xn[0] - x[0], xn[1] - x[1]};
        const Vec2 y{gn2[0] - g[0], gn2[1] - g[1]};
        const double sy = s[0] * y[0] + s[1] * y[1];
        const double xscale = std::max(1.0, std::hypot(x[0], x[1]));
        const double snorm = std::hypot(s[0], s[1]);
        x = xn;
        fx = fn;
        g = gn2;
        if (sy > 1e-12) {  // BFGS update on the inverse Hessian
            const double rho = 1.0 / sy;
            const double hy0 = h00 * y[0] + h01 * y[1];
            const double hy1 = h01 * y[0] + h11 * y[1];
            const double yhy = y[0] * hy0 + y[1] * hy1;
            const double c = (1.0 + rho * yhy) * rho;
            h00 += c * s[0] * s[0] - rho * (s[0] * hy0 + hy0 * s[0]);
            h01 += c * s[0] * s[1] - rho * (s[0] * hy1 + hy0 * s[1]);
            h11 += c * s[1] * s[1] - rho * (s[1] * hy1 + hy1 * s[1]);
        }
        if (snorm < step_tol * xscale) {
            const double gfinal = std::hypot(g[0], g[1]);
            res.grad_norm = gfinal;
            res.converged = gfinal < grad_tol;
            break;
        }
    }
    res.x = x;
    res.fx = fx;
    return res;
}

/// Nelder-Mead in two dimensions; used when curvature information is
/// unreliable. Infeasible vertices carry +inf and get contracted away.
inline MinResult2 nelder_mead2(const std::function<double(const Vec2&)>& f, Vec2 x0,
                               double scale = 0.25, int max_iter = 2000,
                               double ftol = 1e-13) {
    std::array<Vec2, 3> v{Vec2{x0[0], x0[1]},
                          Vec2{x0[0] + scale, x0[1]},
                          Vec2{x0[0], x0[1] + scale}};
    std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
    MinResult2 res;
    auto order = [&] {
        if (fv[0] > fv[1]) { std::swap(fv[0], fv[1]); std::swap(v[0], v[1]); }
        if (fv[1] > fv[2]) { std::swap(fv[1], fv[2]); std::swap(v[1], v[2]); }
        if (fv[0] > fv[1]) { std::swap(fv[0], fv[1]); std::swap(v[0], v[1]); }
    };
    order();
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        if (std::isfinite(fv[2]) &&
            std::fabs(fv[2] - fv[0]) <= ftol * (std::fabs(fv[0]) + 1e-30)) {
            res.converged = true;
            break;
        }
        const Vec2 c{0.5 * (v[0][0] + v[1][0]), 0.5 * (v[0][1] + v[1][1])};
        const Vec2 xr{c[0] + (c[0] - v[2][0]), c[1] + (c[1] - v[2][1])};
        const double fr = f(xr);
        if (fr < fv[0]) {
            const Vec2 xe{c[0] + 2.0 * (c[0] - v[2][0]), c[1] + 2.0 * (c[1] - v[2][1])};
            const double fe = f(xe);
            if (fe < fr) { v[2] = xe; fv[2] = fe; }
            else         { v[2] = xr; fv[2] = fr; }
        } else if (fr < fv[1]) {
            v[2] = xr; fv[2] = fr;
        } else {
            const Vec2 xc{c[0] + 0.5 * (v[2][0] - c[0]), c[1] + 0.5 * (v[2][1] - c[1])};
            const double fc = f(xc);
            if (fc < fv[2]) { v[2] = xc; fv[2] = fc; }
            else {
                for (int i = 1; i < 3; ++i) {
                    v[i] = {0.5 * (v[i][0] + v[0][0]), 0.5 * (v[i][1] + v[0][1])};
                    fv[i] = f(v[i]);
                }
            }
        }
        order();
    }
    res.x = v[0];
    res.fx = fv[0];
    return res;
}

}  // namespace mevt::detail
