#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "mevt/core.hpp"

using namespace mevt;

TEST_CASE("gev_cdf closed form") {
    // bracket equals 1 at z = mu regardless of sigma
    CHECK(gev_cdf(3.0, {3.0, 2.5, 0.5}) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    // Gumbel limit at the location
    CHECK(gev_cdf(0.0, {0.0, 1.0, 0.0}) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    // high-precision evaluation: mu=0 sigma=2 xi=0.25 z=1
    CHECK(gev_cdf(1.0, {0.0, 2.0, 0.25}) ==
          Catch::Approx(0.53563887964840462).epsilon(1e-12));
}

TEST_CASE("gev_cdf boundary values, never NaN") {
    GevParams neg{0.0, 1.0, -0.5};  // upper endpoint at mu + sigma/|xi| = 2
    CHECK(gev_cdf(2.5, neg) == 1.0);
    GevParams pos{0.0, 1.0, 0.5};  // lower endpoint at mu - sigma/xi = -2
    CHECK(gev_cdf(-2.5, pos) == 0.0);
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double v = gev_cdf(unif(eng), {unif(eng), 0.5 + std::fabs(unif(eng)), unif(eng) / 3.0});
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("gev_cdf strictly interior on the support interior") {
    GevParams p{-10.0, 2.0, -0.3};
    for (double z = -14.0; z < -10.0 + 2.0 / 0.3 - 0.1; z += 0.4) {
        const double v = gev_cdf(z, p);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("gpd_cdf examples") {
    GpdParams p{-0.5, 2.0, 0.0, 0.1};
    CHECK(gpd_cdf(0.0, p) == 0.0);
    CHECK(gpd_cdf(1.0, p) == Catch::Approx(0.4375).epsilon(1e-14));
    // aligned Rx1 fit values at depth equal to the scale
    GpdParams rx1{-0.1469, 4.0367, -15.0, 0.05};
    CHECK(gpd_cdf(4.0367, rx1) == Catch::Approx(0.66092769311868494).epsilon(1e-12));
    CHECK_THROWS_AS(gpd_cdf(-0.1, p), std::domain_error);
    // exactly 1 at and past the negative-xi endpoint
    CHECK(gpd_cdf(4.0, p) == 1.0);
    CHECK(gpd_cdf(17.0, p) == 1.0);
}

TEST_CASE("gpd_quantile examples and inverse property") {
    GpdParams p{-0.5, 2.0, 0.0, 0.1};
    CHECK(gpd_quantile(0.0, p) == 0.0);
    CHECK(gpd_quantile(0.4375, p) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(gpd_quantile(1.0, p), std::domain_error);
    CHECK_THROWS_AS(gpd_quantile(-0.1, p), std::domain_error);

    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        GpdParams q{(unif(eng) - 0.5) * 1.2, 0.2 + 4.0 * unif(eng), 0.0, 0.5};
        const double pr = 0.999 * unif(eng);
        CHECK(gpd_cdf(gpd_quantile(pr, q), q) == Catch::Approx(pr).margin(1e-10));
        const double l = gpd_quantile(0.99, q) * unif(eng);
        CHECK(gpd_quantile(gpd_cdf(l, q), q) == Catch::Approx(l).epsilon(1e-10).margin(1e-12));
    }
}

TEST_CASE("gpd_support_endpoint") {
    CHECK(gpd_support_endpoint({-0.5, 2.0, 0.0, 0.1}) == Catch::Approx(4.0));
    CHECK(std::isinf(gpd_support_endpoint({0.1, 1.0, 0.0, 0.1})));
    CHECK(gpd_support_endpoint({-0.1469, 4.0367, 0.0, 0.1}) ==
          Catch::Approx(27.479237576582709).epsilon(1e-12));
}

TEST_CASE("gpd_log_likelihood") {
    std::vector<double> one{0.0};
    CHECK(gpd_log_likelihood(one, 0.0, 1.0) == Catch::Approx(0.0).margin(1e-15));
    std::vector<double> two{1.0, 2.0};
    CHECK(gpd_log_likelihood(two, 0.0, 1.0) == Catch::Approx(-3.0).epsilon(1e-14));
    std::vector<double> beyond{5.0};
    CHECK(gpd_log_likelihood(beyond, -0.5, 2.0) == -kInf);
    std::vector<double> empty;
    CHECK_THROWS_AS(gpd_log_likelihood(empty, 0.0, 1.0), std::domain_error);
}

TEST_CASE("gpd_cdf monotone in depth") {
    std::mt19937_64 eng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        GpdParams p{(unif(eng) - 0.5) * 1.5, 0.3 + 5.0 * unif(eng), 0.0, 0.5};
        double prev = -1.0;
        for (int i = 0; i <= 60; ++i) {
            const double l = i * 0.25 * p.sigma_tilde;
            const double v = gpd_cdf(l, p);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("gpd_cdf continuous at xi -> 0") {
    GpdParams tiny{1e-9, 1.7, 0.0, 0.2};
    for (double l = 0.0; l <= 17.0; l += 0.37) {
        const double expo = 1.0 - std::exp(-l / 1.7);
        CHECK(std::fabs(gpd_cdf(l, tiny) - expo) < 1e-7);
    }
}

TEST_CASE("PowerSeries validation") {
    PowerSeries s;
    s.t = {0, 1, 1};
    s.dbm = {-10.0, -11.0, -12.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.t = {0, 1, 2};
    s.dbm[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.dbm[1] = -11.0;
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("GpdParams invariants") {
    CHECK_THROWS_AS((GpdParams{0.0, -1.0, 0.0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GpdParams{0.0, 1.0, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GpdParams{0.0, 1.0, 0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_NOTHROW((GpdParams{-0.3, 2.0, -15.0, 0.05}.validate()));
}
