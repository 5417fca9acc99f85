#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "mevt/joint.hpp"
#include "mevt/logistic.hpp"
#include "mevt/synth.hpp"

using namespace mevt;

TEST_CASE("alpha_from_rho") {
    const auto ind = alpha_from_rho(0.0);
    CHECK(ind.alpha == 1.0);
    CHECK(ind.boundary);
    CHECK(alpha_from_rho(0.3957).alpha == Catch::Approx(0.77736735202862745).epsilon(1e-12));
    CHECK(alpha_from_rho(0.75).alpha == Catch::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(alpha_from_rho(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(alpha_from_rho(1.0), std::domain_error);
}

TEST_CASE("v_logistic examples") {
    CHECK(v_logistic(2.0, 4.0, 1.0) == Catch::Approx(0.75).epsilon(1e-14));
    CHECK(v_logistic(1.0, 1.0, 0.5) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-13));
    // complete-dependence limit: V -> 1/min(x,y)
    CHECK(v_logistic(2.0, 4.0, 0.01) == Catch::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("g_logistic examples") {
    LogisticModel half{0.5};
    CHECK(g_logistic(1.0, 1.0, half) == Catch::Approx(0.24311673443421421).epsilon(1e-12));
    CHECK(g_logistic(1e13, 1e13, half) == Catch::Approx(1.0).margin(1e-12));
    LogisticModel indep{1.0};
    CHECK(g_logistic(1.0, 1.0, indep) == Catch::Approx(0.13533528323661269).epsilon(1e-12));
}

TEST_CASE("V homogeneity and margins") {
    std::mt19937_64 eng(12);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = 0.05 + 0.9 * unif(eng);
        const double x = std::exp(6.0 * unif(eng) - 1.0);
        const double y = std::exp(6.0 * unif(eng) - 1.0);
        const double c = std::exp(4.0 * unif(eng) - 2.0);
        CHECK(v_logistic(c * x, c * y, a) ==
              Catch::Approx(v_logistic(x, y, a) / c).epsilon(1e-12));
    }
    // unit Fréchet margin as the other argument goes to infinity
    LogisticModel m{0.6};
    for (double x : {0.5, 1.0, 3.0, 20.0})
        CHECK(g_logistic(x, 1e12, m) == Catch::Approx(std::exp(-1.0 / x)).margin(1e-10));
}

TEST_CASE("dependence ordering in alpha") {
    // for fixed arguments the CDF moves monotonically with alpha
    for (double x : {0.7, 1.3})
        for (double y : {0.9, 2.4}) {
            double prev = -1.0;
            for (double a = 0.05; a <= 1.0; a += 0.05) {
                const double g = std::exp(-v_logistic(x, y, a));
                if (prev >= 0.0) CHECK(g <= prev + 1e-12);
                prev = g;
            }
        }
}

TEST_CASE("logistic_mixed_partial") {
    CHECK(logistic_mixed_partial(1.3, 0.8, 1.0) == 0.0);
    CHECK(logistic_mixed_partial(1.0, 1.0, 0.5) ==
          Catch::Approx(-0.35355339059327379).epsilon(1e-12));
    // exchangeability
    CHECK(logistic_mixed_partial(2.3, 0.4, 0.66) ==
          Catch::Approx(logistic_mixed_partial(0.4, 2.3, 0.66)).epsilon(1e-13));
    // negative on the open alpha interval
    CHECK(logistic_mixed_partial(3.0, 5.0, 0.3) < 0.0);
}

TEST_CASE("mixed partial matches central finite differences") {
    // Richardson-extrapolated central differences; the draw domain keeps the
    // quotient conditioned (V_xy collapses to ~1e-13*V at small alpha and
    // wide x/y ratios, where double-precision differencing cannot resolve it)
    std::mt19937_64 eng(2718);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto fd_mixed = [](double x, double y, double a) {
        auto d = [&](double h) {
            const double hx = h * x, hy = h * y;
            return (v_logistic(x + hx, y + hy, a) - v_logistic(x + hx, y - hy, a) -
                    v_logistic(x - hx, y + hy, a) + v_logistic(x - hx, y - hy, a)) /
                   (4.0 * hx * hy);
        };
        return (4.0 * d(1e-3) - d(2e-3)) / 3.0;
    };
    for (int i = 0; i < 300; ++i) {
        const double a = 0.3 + 0.65 * unif(eng);
        const double lx = 3.0 * unif(eng) - 1.5;
        const double ly = std::clamp(lx + 6.0 * unif(eng) - 3.0, -1.6, 3.0);
        const double x = std::exp(lx), y = std::exp(ly);
        const double cf = logistic_mixed_partial(x, y, a);
        CHECK(cf == Catch::Approx(fd_mixed(x, y, a)).epsilon(1e-5));
    }
}

TEST_CASE("fit_alpha_mle recovers the generator dependency") {
    const auto pairs = gen_bivariate_logistic_frechet(0.7, 5000, 42);
    const auto m = fit_alpha_mle(pairs);
    REQUIRE(m.converged);
    CHECK(m.alpha > 0.65);
    CHECK(m.alpha < 0.75);
    CHECK_FALSE(m.boundary);

    // from-rho route on the Gumbel (log) scale agrees
    std::vector<double> lx, ly;
    for (const auto& p : pairs) {
        lx.push_back(std::log(p.x_tilde));
        ly.push_back(std::log(p.y_tilde));
    }
    const double rho = pearson_correlation(lx, ly);
    const auto mr = alpha_from_rho(std::max(0.0, rho));
    CHECK(std::fabs(mr.alpha - m.alpha) < 0.05);
}

TEST_CASE("fit_alpha_mle consistency at large n") {
    const auto pairs = gen_bivariate_logistic_frechet(0.7, 100000, 7);
    const auto m = fit_alpha_mle(pairs);
    CHECK(std::fabs(m.alpha - 0.7) < 0.02);
}

TEST_CASE("fit_alpha_mle flags boundary fits") {
    const auto indep = gen_bivariate_logistic_frechet(1.0, 5000, 9);
    const auto mi = fit_alpha_mle(indep);
    CHECK(mi.alpha > 0.95);
    CHECK(mi.boundary);

    std::vector<FrechetPair> comon;
    Rng rng(13);
    for (int i = 0; i < 2000; ++i) {
        const double v = -1.0 / std::log(rng.uniform_pos());
        comon.push_back({v, v, i});
    }
    const auto mc = fit_alpha_mle(comon);
    CHECK(mc.alpha < 0.05);
    CHECK(mc.boundary);

    std::vector<FrechetPair> few(5, FrechetPair{1.0, 1.0, 0});
    CHECK_THROWS_AS(fit_alpha_mle(few), std::invalid_argument);
}

TEST_CASE("both likelihood forms agree on joint tail samples") {
    // tail-style pairs: components requantilized into the joint tail region,
    // where the full density degenerates to the intensity form
    const auto pairs = gen_bivariate_logistic_frechet(0.6, 4000, 21);
    std::vector<FrechetPair> tail;
    const double zeta = 0.05;
    for (const auto& p : pairs) {
        const double ux = -std::expm1(-1.0 / p.x_tilde);
        const double uy = -std::expm1(-1.0 / p.y_tilde);
        tail.push_back({-1.0 / std::log1p(-zeta * ux), -1.0 / std::log1p(-zeta * uy), 0});
    }
    const auto full = fit_alpha_mle(tail, LogisticLikelihood::FullDensity);
    const auto lit = fit_alpha_mle(tail, LogisticLikelihood::MixedPartialOnly);
    CHECK(std::fabs(full.alpha - lit.alpha) < 0.02);
}

TEST_CASE("logistic_angular_density normalizes and is symmetric") {
    // the density has integrable endpoint singularities for alpha > 1/2, so
    // a plain midpoint sum converges slowly there
    for (double a : {0.3, 0.5, 0.7}) {
        double sum = 0.0;
        const int n = 20001;
        for (int i = 0; i < n; ++i) {
            const double w = (i + 0.5) / n;
            sum += logistic_angular_density(w, a) / n;
        }
        CHECK(sum == Catch::Approx(1.0).epsilon(a > 0.5 ? 2e-2 : 2e-3));
        CHECK(logistic_angular_density(0.3, a) ==
              Catch::Approx(logistic_angular_density(0.7, a)).epsilon(1e-12));
    }
}
