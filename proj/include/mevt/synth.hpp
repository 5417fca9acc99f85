#pragma once

// Ground-truth data generation: exact draws from the bivariate logistic
// extreme value distribution via the positive-stable mixture, paired
// power traces whose planted tails follow known GPD margins with logistic
// dependence, and the brute-force empirical joint CDF. Uniform deviates
// come straight from the mt19937_64 bit stream, so identical seeds give
// bit-identical output on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "mevt/core.hpp"
#include "mevt/transforms.hpp"

namespace mevt {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// uniform on (0, 1]
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential() { return -std::log(uniform_pos()); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform_pos();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Positive alpha-stable draw with Laplace transform exp(-t^alpha),
/// 0 < alpha < 1 (Chambers-Mallows-Stuck).
inline double sample_positive_stable(double alpha, Rng& rng) {
    const double u = rng.uniform_pos() * 3.141592653589793;
    const double w = rng.exponential();
    return std::pow(std::sin((1.0 - alpha) * u) / w, (1.0 - alpha) / alpha) *
           std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
}

/// Exact draws from the bivariate logistic EV distribution with unit
/// Fréchet margins: conditional on a stable factor S, the components are
/// (S/E)^alpha with independent unit exponentials E.
inline std::vector<FrechetPair> gen_bivariate_logistic_frechet(double alpha, std::size_t n,
                                                               std::uint64_t seed) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("gen_bivariate_logistic_frechet: alpha must lie in (0,1]");
    Rng rng(seed);
    std::vector<FrechetPair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FrechetPair p;
        p.window = static_cast<std::int64_t>(i);
        if (alpha == 1.0) {
            p.x_tilde = 1.0 / rng.exponential();
            p.y_tilde = 1.0 / rng.exponential();
        } else {
            const double s = sample_positive_stable(alpha, rng);
            p.x_tilde = std::pow(s / rng.exponential(), alpha);
            p.y_tilde = std::pow(s / rng.exponential(), alpha);
        }
        out.push_back(p);
    }
    return out;
}

struct GeneratorTruth {
    double alpha = 0.5;
    GpdParams gpd_x, gpd_y;
    std::int64_t window_len = 1000;
    double tail_fraction = 0.0;
    std::size_t n_windows = 0;
    std::size_t dips_x = 0, dips_y = 0;
    std::size_t joint_windows = 0;
};

struct SynthTraces {
    PowerSeries rx1, rx2;
    GeneratorTruth truth;
};

/// Paired power traces: per window one latent logistic pair drives whether
/// each margin dips below its threshold (marginal dip probability equals
/// tail_fraction), and dip depths are the GPD quantiles of the latent tail
/// probabilities. Margins of the planted depths are therefore exactly GPD,
/// and windows where both series dip carry the logistic joint tail law.
/// Bulk samples are Gaussian in dBm, clipped to stay above the thresholds.
inline SynthTraces gen_tail_power_traces(const GpdParams& gpd_x, const GpdParams& gpd_y,
                                         double alpha, std::size_t n_total,
                                         double tail_fraction, std::uint64_t seed,
                                         std::int64_t window_len = 1000) {
    gpd_x.validate();
    gpd_y.validate();
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("gen_tail_power_traces: alpha must lie in (0,1]");
    if (!(tail_fraction >= 0.0) || tail_fraction >= 0.25)
        throw std::invalid_argument("gen_tail_power_traces: tail_fraction must lie in [0, 0.25)");
    if (window_len < 16) throw std::invalid_argument("gen_tail_power_traces: window too short");
    if (n_total < static_cast<std::size_t>(window_len))
        throw std::invalid_argument("gen_tail_power_traces: n_total below one window");

    Rng rng(seed);
    SynthTraces out;
    out.truth.alpha = alpha;
    out.truth.gpd_x = gpd_x;
    out.truth.gpd_y = gpd_y;
    out.truth.window_len = window_len;
    out.truth.tail_fraction = tail_fraction;

    const std::size_t W = n_total / static_cast<std::size_t>(window_len);
    const std::size_t N = W * static_cast<std::size_t>(window_len);
    out.truth.n_windows = W;

    auto fill_bulk = [&](PowerSeries& s, double u) {
        // clip just above the threshold so the bulk density reaches down to
        // u without crossing it (no gap for threshold selection to sit in)
        const double mu = u + 10.0, sd = 3.0, lo = u + 0.01;
        s.t.resize(N);
        s.dbm.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            s.t[i] = static_cast<std::int64_t>(i);
            s.dbm[i] = std::max(mu + sd * rng.normal(), lo);
        }
    };
    fill_bulk(out.rx1, gpd_x.u);
    fill_bulk(out.rx2, gpd_y.u);

    auto plant = [&](PowerSeries& s, const GpdParams& p, std::size_t w, double tail_prob) {
        // depth at survival probability tail_prob/tail_fraction, exact GPD
        const double depth = gpd_quantile(1.0 - tail_prob / tail_fraction, p);
        const double minimum = p.u - depth;
        const std::size_t base = w * static_cast<std::size_t>(window_len);
        const std::size_t off = 4 + rng.below(static_cast<std::uint64_t>(window_len) - 12);
        s.dbm[base + off] = minimum;
        // short shoulders when the dip is deep enough to keep them sub-threshold
        const double shoulder = p.u - 0.3 * depth;
        if (shoulder < p.u && rng.uniform() < 0.5) {
            s.dbm[base + off - 1] = shoulder;
            s.dbm[base + off + 1] = shoulder;
        }
    };

    if (tail_fraction > 0.0) {
        for (std::size_t w = 0; w < W; ++w) {
            double ux, uy;  // latent tail probabilities, logistic survival copula
            if (alpha == 1.0) {
                ux = rng.uniform_pos();
                uy = rng.uniform_pos();
            } else {
                const double s = sample_positive_stable(alpha, rng);
                const double xt = std::pow(s / rng.exponential(), alpha);
                const double yt = std::pow(s / rng.exponential(), alpha);
                ux = -std::expm1(-1.0 / xt);
                uy = -std::expm1(-1.0 / yt);
            }
            const bool dx = ux < tail_fraction;
            const bool dy = uy < tail_fraction;
            if (dx) {
                plant(out.rx1, gpd_x, w, ux);
                ++out.truth.dips_x;
            }
            if (dy) {
                plant(out.rx2, gpd_y, w, uy);
                ++out.truth.dips_y;
            }
            if (dx && dy) ++out.truth.joint_windows;
        }
    }
    return out;
}

/// Empirical joint CDF surface: counts/n of pairs dominated by each node.
/// Row-major over (grid_x, grid_y).
inline std::vector<double> brute_force_joint_cdf(std::span<const double> px,
                                                 std::span<const double> py,
                                                 std::span<const double> grid_x,
                                                 std::span<const double> grid_y) {
    if (px.size() != py.size() || px.empty())
        throw std::invalid_argument("brute_force_joint_cdf: need nonempty paired samples");
    std::vector<double> z(grid_x.size() * grid_y.size(), 0.0);
    const double n = static_cast<double>(px.size());
    for (std::size_t k = 0; k < px.size(); ++k)
        for (std::size_t i = 0; i < grid_x.size(); ++i) {
            if (px[k] > grid_x[i]) continue;
            for (std::size_t j = 0; j < grid_y.size(); ++j)
                if (py[k] <= grid_y[j]) z[i * grid_y.size() + j] += 1.0;
        }
    for (auto& v : z) v /= n;
    return z;
}

}  // namespace mevt
