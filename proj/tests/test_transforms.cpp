#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "mevt/synth.hpp"
#include "mevt/transforms.hpp"

using namespace mevt;

TEST_CASE("frechet_transform at the threshold limit") {
    GpdParams p{-0.2, 4.0, -15.0, 0.05};
    CHECK(frechet_transform(-15.0 - 1e-10, p) ==
          Catch::Approx(19.495725746223689).epsilon(1e-6));
    GpdParams q{-0.2, 4.0, -15.0, 0.5};
    CHECK(frechet_transform(-15.0 - 1e-10, q) ==
          Catch::Approx(1.4426950408889634).epsilon(1e-6));
    CHECK_THROWS_AS(frechet_transform(-14.0, p), std::domain_error);
    CHECK_THROWS_AS(frechet_transform(-15.0, p), std::domain_error);
}

TEST_CASE("frechet_transform clamps beyond the support endpoint") {
    GpdParams p{-0.5, 2.0, -15.0, 0.05};  // endpoint depth 4
    std::size_t clamped = 0;
    CHECK(frechet_transform(-19.5, p, 1e12, &clamped) == 1e12);
    CHECK(frechet_transform(-19.0, p, 1e12, &clamped) == 1e12);  // exactly at endpoint
    CHECK(clamped == 2);
}

TEST_CASE("frechet_transform strictly decreasing in x") {
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        GpdParams p{(unif(eng) - 0.5) * 1.2, 0.5 + 5.0 * unif(eng), -15.0,
                    0.01 + 0.4 * unif(eng)};
        const double lmax = p.xi < 0.0 ? -p.sigma_tilde / p.xi : 8.0 * p.sigma_tilde;
        double prev = 0.0;  // deeper fade (smaller x) gives larger transform
        for (int i = 1; i <= 30; ++i) {
            const double x = p.u - lmax * 0.98 * i / 30.0;
            const double v = frechet_transform(x, p);
            if (v >= kFrechetClampCap) {
                CHECK(v == kFrechetClampCap);  // strictness ends at the clamp
                prev = v;
                continue;
            }
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("frechet_margin_ks") {
    SECTION("exact unit Fréchet sample") {
        Rng rng(2024);
        std::vector<double> s(10000);
        for (auto& v : s) v = -1.0 / std::log(rng.uniform_pos());
        CHECK(frechet_margin_ks(s) < 0.02);
    }
    SECTION("single sample at the Fréchet median") {
        std::vector<double> one{-1.0 / std::log(0.5)};
        CHECK(frechet_margin_ks(one) == Catch::Approx(0.5).epsilon(1e-12));
    }
    SECTION("all mass far in the upper tail") {
        std::vector<double> huge(100, 1e9);
        CHECK(frechet_margin_ks(huge) > 0.999);
    }
    CHECK_THROWS_AS(frechet_margin_ks(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("pickands transform examples") {
    CHECK(pickands_transform({2.0, 2.0, 0}, 7).omega == Catch::Approx(0.5));
    const auto pt = pickands_transform({3.0, 1.0, 0}, 10);
    CHECK(pt.omega == Catch::Approx(0.75));
    CHECK(pt.r == Catch::Approx(-0.4));
    const auto f = pickands_inverse({0.75, -0.4}, 10);
    CHECK(f.x_tilde == Catch::Approx(3.0).epsilon(1e-12));
    CHECK(f.y_tilde == Catch::Approx(1.0).epsilon(1e-12));
    const auto g = pickands_inverse({0.5, -0.2}, 10);
    CHECK(g.x_tilde == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(g.y_tilde == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pickands degenerate inputs") {
    CHECK_THROWS_AS(pickands_inverse({0.5, 0.0}, 10), std::domain_error);
    CHECK_THROWS_AS(pickands_inverse({0.0, -0.2}, 10), std::domain_error);
    CHECK_THROWS_AS(pickands_inverse({1.0, -0.2}, 10), std::domain_error);
    CHECK_THROWS_AS(pickands_transform({0.0, 1.0, 0}, 10), std::domain_error);
    CHECK_THROWS_AS(pickands_transform({1.0, 1.0, 0}, 0), std::invalid_argument);
}

TEST_CASE("pickands round trip and scale invariance") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(eng() % 5000);
        FrechetPair f{std::exp(8.0 * unif(eng) - 2.0), std::exp(8.0 * unif(eng) - 2.0), 0};
        const auto pt = pickands_transform(f, n);
        CHECK(pt.r < 0.0);
        CHECK(pt.omega >= 0.0);
        CHECK(pt.omega <= 1.0);
        const auto back = pickands_inverse(pt, n);
        CHECK(back.x_tilde == Catch::Approx(f.x_tilde).epsilon(1e-12));
        CHECK(back.y_tilde == Catch::Approx(f.y_tilde).epsilon(1e-12));

        const double c = 0.1 + 10.0 * unif(eng);
        const auto scaled = pickands_transform({c * f.x_tilde, c * f.y_tilde, 0}, n);
        CHECK(scaled.omega == Catch::Approx(pt.omega).epsilon(1e-12));
        CHECK(scaled.r == Catch::Approx(c * pt.r).epsilon(1e-12));
    }
}
