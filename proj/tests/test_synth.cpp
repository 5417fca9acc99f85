#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mevt/decluster.hpp"
#include "mevt/joint.hpp"
#include "mevt/logistic.hpp"
#include "mevt/synth.hpp"
#include "mevt/transforms.hpp"

using namespace mevt;

TEST_CASE("logistic sampler margins are unit Fréchet") {
    const std::size_t n = 20000;
    for (double a : {0.3, 0.5, 0.7, 1.0}) {
        const auto pairs = gen_bivariate_logistic_frechet(a, n, 101);
        std::vector<double> xs, ys;
        for (const auto& p : pairs) {
            xs.push_back(p.x_tilde);
            ys.push_back(p.y_tilde);
        }
        CHECK(frechet_margin_ks(xs) < 1.5 / std::sqrt(static_cast<double>(n)));
        CHECK(frechet_margin_ks(ys) < 1.5 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("logistic sampler joint CDF matches the closed form") {
    const std::size_t n = 20000;
    for (double a : {0.3, 0.5, 0.7}) {
        const auto pairs = gen_bivariate_logistic_frechet(a, n, 202);
        std::vector<double> xs, ys;
        for (const auto& p : pairs) {
            xs.push_back(p.x_tilde);
            ys.push_back(p.y_tilde);
        }
        auto qgrid = [&](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            std::vector<double> g;
            for (int i = 0; i < 20; ++i)
                g.push_back(v[static_cast<std::size_t>((0.04 + 0.92 * i / 19.0) * (n - 1))]);
            return g;
        };
        const auto gx = qgrid(xs), gy = qgrid(ys);
        double sup = 0.0;
        for (double agx : gx)
            for (double agy : gy) {
                std::size_t cnt = 0;
                for (std::size_t k = 0; k < n; ++k)
                    if (xs[k] <= agx && ys[k] <= agy) ++cnt;
                const double emp = static_cast<double>(cnt) / static_cast<double>(n);
                sup = std::max(sup, std::fabs(emp - std::exp(-v_logistic(agx, agy, a))));
            }
        CHECK(sup < 3.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("independence and complete-dependence limits") {
    const auto ind = gen_bivariate_logistic_frechet(1.0, 20000, 303);
    std::vector<double> u1, u2;
    for (const auto& p : ind) {
        u1.push_back(std::exp(-1.0 / p.x_tilde));  // probability transforms
        u2.push_back(std::exp(-1.0 / p.y_tilde));
    }
    CHECK(std::fabs(pearson_correlation(u1, u2)) < 3.0 / std::sqrt(20000.0));

    const auto dep = gen_bivariate_logistic_frechet(0.01, 1000, 404);
    for (const auto& p : dep) {
        const double w = p.x_tilde / (p.x_tilde + p.y_tilde);
        CHECK(std::fabs(w - 0.5) < 0.05);
    }
}

TEST_CASE("sampler determinism") {
    const auto a = gen_bivariate_logistic_frechet(0.6, 500, 42);
    const auto b = gen_bivariate_logistic_frechet(0.6, 500, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x_tilde == b[i].x_tilde);
        CHECK(a[i].y_tilde == b[i].y_tilde);
    }
    const auto c = gen_bivariate_logistic_frechet(0.6, 500, 43);
    CHECK(a[0].x_tilde != c[0].x_tilde);
}

TEST_CASE("positive stable Laplace transform") {
    Rng rng(7);
    for (double a : {0.3, 0.7}) {
        double acc = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) acc += std::exp(-sample_positive_stable(a, rng));
        const double lhs = acc / n;
        CHECK(lhs == Catch::Approx(std::exp(-1.0)).margin(0.01));
    }
}

TEST_CASE("gen_tail_power_traces planted tails") {
    GpdParams px{-0.2, 5.0, -15.0, 0.01};
    GpdParams py{-0.3, 4.0, -30.0, 0.01};
    const auto tr = gen_tail_power_traces(px, py, 0.7, 200000, 0.2, 31, 100);
    CHECK(tr.rx1.size() == 200000);
    CHECK(tr.truth.n_windows == 2000);
    // dip rate matches the marginal tail fraction
    CHECK(std::fabs(static_cast<double>(tr.truth.dips_x) / 2000.0 - 0.2) < 0.04);
    CHECK(tr.truth.joint_windows > 100);

    // depths of cluster minima below u are exactly GPD
    const auto cl = decluster(tr.rx1, px.u, 2);
    REQUIRE(cl.size() == tr.truth.dips_x);
    std::vector<double> depths;
    for (const auto& c : cl) depths.push_back(px.u - c.minimum);
    std::sort(depths.begin(), depths.end());
    double ks = 0.0;
    const double n = static_cast<double>(depths.size());
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const double F = gpd_cdf(depths[i], px);
        ks = std::max(ks, std::max((i + 1.0) / n - F, F - static_cast<double>(i) / n));
    }
    CHECK(ks < 1.6 / std::sqrt(n));

    // rx2 clusters match the planted dips too (shoulders join the same
    // cluster, the bulk never crosses the threshold)
    const auto cl2 = decluster(tr.rx2, py.u, 2);
    CHECK(cl2.size() == tr.truth.dips_y);
}

TEST_CASE("gen_tail_power_traces zero tail fraction") {
    GpdParams p{-0.2, 5.0, -15.0, 0.01};
    const auto tr = gen_tail_power_traces(p, p, 0.7, 50000, 0.0, 5, 100);
    for (double v : tr.rx1.dbm) CHECK(v > p.u);
    CHECK(tr.truth.joint_windows == 0);
}

TEST_CASE("gen_tail_power_traces determinism") {
    GpdParams p{-0.2, 5.0, -15.0, 0.01};
    const auto a = gen_tail_power_traces(p, p, 0.5, 30000, 0.1, 9, 100);
    const auto b = gen_tail_power_traces(p, p, 0.5, 30000, 0.1, 9, 100);
    CHECK(a.rx1.dbm == b.rx1.dbm);
    CHECK(a.rx2.dbm == b.rx2.dbm);
    CHECK_THROWS_AS(gen_tail_power_traces(p, p, 0.5, 30000, 0.3, 9, 100),
                    std::invalid_argument);
}

TEST_CASE("brute_force_joint_cdf") {
    std::vector<double> px{1.0}, py{2.0};
    std::vector<double> gx{0.5, 1.0, 3.0}, gy{1.0, 2.0};
    const auto z = brute_force_joint_cdf(px, py, gx, gy);
    REQUIRE(z.size() == 6);
    CHECK(z[0 * 2 + 0] == 0.0);  // node below the pair
    CHECK(z[1 * 2 + 1] == 1.0);  // node at the pair
    CHECK(z[2 * 2 + 1] == 1.0);  // node dominating the pair

    // iid uniform pairs: surface approximates the product u*v
    Rng rng(12);
    const std::size_t n = 40000;
    std::vector<double> ux(n), uy(n);
    for (std::size_t i = 0; i < n; ++i) {
        ux[i] = rng.uniform();
        uy[i] = rng.uniform();
    }
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    const auto s = brute_force_joint_cdf(ux, uy, g, g);
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j)
            sup = std::max(sup, std::fabs(s[i * g.size() + j] - g[i] * g[j]));
    CHECK(sup < 2.0 / std::sqrt(static_cast<double>(n)));
}
