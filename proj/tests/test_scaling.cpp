// Power-law fitting in linear scale, analytic model exponents, beta fits.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fxnet/scaling.hpp"

using namespace fxnet;

namespace {

std::vector<FitPoint> exact_power(double c, double alpha, int k_max) {
    std::vector<FitPoint> pts;
    for (int k = 1; k <= k_max; ++k)
        pts.push_back({static_cast<double>(k), c * std::pow(k, -alpha)});
    return pts;
}

}  // namespace

TEST_CASE("fit_power recovers exact power laws across the parameter box") {
    for (const double c : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        for (const double alpha : {0.5, 1.0, 1.5, 2.2, 3.0}) {
            const PowerFit fit = fit_power(exact_power(c, alpha, 8));
            CHECK_THAT(fit.alpha, Catch::Matchers::WithinAbs(alpha, 1e-6));
            CHECK_THAT(fit.amplitude, Catch::Matchers::WithinAbs(c, 1e-6));
            CHECK(fit.sse < 1e-12);
            CHECK(fit.delta_alpha < 1e-6);
            CHECK(fit.points_used == 8);
        }
    }
}

TEST_CASE("fit_power on 1/K^2 and 0.8/K^1.5 samples") {
    const std::vector<FitPoint> quad = {{1, 1.0}, {2, 0.25}, {3, 1.0 / 9.0}, {4, 0.0625}, {5, 0.04}};
    const PowerFit f1 = fit_power(quad);
    CHECK_THAT(f1.alpha, Catch::Matchers::WithinAbs(2.0, 1e-6));
    CHECK_THAT(f1.amplitude, Catch::Matchers::WithinAbs(1.0, 1e-6));

    const PowerFit f2 = fit_power(exact_power(0.8, 1.5, 8));
    CHECK_THAT(f2.alpha, Catch::Matchers::WithinAbs(1.5, 1e-6));
    CHECK_THAT(f2.amplitude, Catch::Matchers::WithinAbs(0.8, 1e-6));
}

TEST_CASE("fit_power is exactly invariant under input permutation") {
    std::vector<FitPoint> pts = exact_power(0.9, 1.2, 9);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].f *= 1.0 + 0.03 * ((i % 2 == 0) ? 1.0 : -1.0);
    const PowerFit reference = fit_power(pts);

    std::mt19937_64 shuffler(7);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(pts.begin(), pts.end(), shuffler);
        const PowerFit fit = fit_power(pts);
        CHECK(fit.alpha == reference.alpha);
        CHECK(fit.amplitude == reference.amplitude);
        CHECK(fit.sse == reference.sse);
    }
}

TEST_CASE("unit-amplitude mode pins the prefactor to 1") {
    const PowerFit fit = fit_power(exact_power(1.0, 1.2, 8), FitMode::UnitAmplitude);
    CHECK(fit.amplitude == 1.0);
    CHECK(fit.mode == FitMode::UnitAmplitude);
    CHECK_THAT(fit.alpha, Catch::Matchers::WithinAbs(1.2, 1e-6));
    CHECK(fit.delta_alpha < 1e-6);
}

TEST_CASE("fit_power beats a dense 2-D grid oracle on noisy data") {
    const double bumps[] = {1.03, 0.97, 1.02, 0.96, 1.04, 0.98, 1.01, 0.95};
    std::vector<FitPoint> pts;
    for (int k = 1; k <= 8; ++k)
        pts.push_back({static_cast<double>(k), 0.9 * std::pow(k, -1.2) * bumps[k - 1]});
    const PowerFit fit = fit_power(pts);

    double oracle_sse = std::numeric_limits<double>::infinity();
    double oracle_alpha = 0.0;
    std::vector<double> weights(pts.size());
    for (int ia = 0; ia <= 2000; ++ia) {
        const double alpha = 0.1 + (3.0 - 0.1) * ia / 2000.0;
        for (std::size_t i = 0; i < pts.size(); ++i) weights[i] = std::pow(pts[i].k, -alpha);
        for (int ic = 0; ic <= 2000; ++ic) {
            const double c = 0.2 + (2.0 - 0.2) * ic / 2000.0;
            double sse = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double r = pts[i].f - c * weights[i];
                sse += r * r;
            }
            if (sse < oracle_sse) {
                oracle_sse = sse;
                oracle_alpha = alpha;
            }
        }
    }
    CHECK(fit.sse <= oracle_sse + 1e-10);
    CHECK_THAT(fit.alpha, Catch::Matchers::WithinAbs(oracle_alpha, 0.01));
}

TEST_CASE("fit_power error paths") {
    const std::vector<FitPoint> two = {{1, 1.0}, {2, 0.5}};
    CHECK_THROWS_WITH(fit_power(two), Catch::Matchers::ContainsSubstring("at least 3 points"));

    const std::vector<FitPoint> bad_k = {{0.0, 1.0}, {2, 0.5}, {3, 0.3}};
    CHECK_THROWS_WITH(fit_power(bad_k), Catch::Matchers::ContainsSubstring("k > 0"));

    // A single abscissa makes the two-parameter model unidentifiable.
    const std::vector<FitPoint> flat = {{2, 1.0}, {2, 1.1}, {2, 0.9}};
    CHECK_THROWS_WITH(fit_power(flat),
                      Catch::Matchers::ContainsSubstring("singular fit covariance"));

    // Rising data wants a negative exponent, outside the search domain.
    const std::vector<FitPoint> rising = {{1, 1.0}, {2, 2.0}, {3, 3.0}, {4, 4.0}};
    CHECK_THROWS_WITH(fit_power(rising),
                      Catch::Matchers::ContainsSubstring("hit the search boundary"));

    // A cliff steeper than the domain allows hits the upper edge.
    const std::vector<FitPoint> cliff = exact_power(1.0, 7.0, 6);
    CHECK_THROWS_WITH(fit_power(cliff),
                      Catch::Matchers::ContainsSubstring("hit the search boundary"));
}

TEST_CASE("rel_err is delta_alpha over alpha") {
    std::vector<FitPoint> pts = exact_power(1.0, 1.5, 8);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].f *= (i % 2 == 0) ? 1.02 : 0.98;
    const PowerFit fit = fit_power(pts);
    CHECK(fit.rel_err == fit.delta_alpha / fit.alpha);
    CHECK(fit.delta_alpha > 0.0);
}

TEST_CASE("replicating every point 4x halves-and-some the error bar") {
    std::vector<FitPoint> pts = exact_power(1.0, 1.5, 8);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].f *= (i % 2 == 0) ? 1.02 : 0.98;
    std::vector<FitPoint> quad;
    for (int copy = 0; copy < 4; ++copy) quad.insert(quad.end(), pts.begin(), pts.end());

    const PowerFit one = fit_power(pts);
    const PowerFit four = fit_power(quad);
    // The profiled objective is scaled by 4 but summation order differs, so
    // the optimizer settles within its flat optimum, not on the same bits.
    CHECK_THAT(four.alpha, Catch::Matchers::WithinAbs(one.alpha, 1e-6));
    // s^2 uses sse / (m - 2): the ratio is sqrt(6/30) up to that wobble.
    CHECK_THAT(four.delta_alpha / one.delta_alpha,
               Catch::Matchers::WithinAbs(std::sqrt(6.0 / 30.0), 1e-4));
}

TEST_CASE("degree-distribution fits use only occupied degrees") {
    // counts {1:12, 2:4, 4:3, 8:1} leaves K = 3, 5, 6, 7 unoccupied.
    std::vector<int> degrees(12, 1);
    degrees.insert(degrees.end(), 4, 2);
    degrees.insert(degrees.end(), 3, 4);
    degrees.push_back(8);
    const PowerFit fit = fit_power(degree_distribution(degrees));
    CHECK(fit.points_used == 4);

    // A star occupies only two distinct degrees: not enough to fit.
    const std::vector<int> star = {5, 1, 1, 1, 1, 1};
    CHECK_THROWS_WITH(fit_power(degree_distribution(star)),
                      Catch::Matchers::ContainsSubstring("3 occupied degree values"));
}

TEST_CASE("parse_fit_mode") {
    CHECK(parse_fit_mode("two") == FitMode::TwoParameter);
    CHECK(parse_fit_mode("unit") == FitMode::UnitAmplitude);
    CHECK_THROWS_WITH(parse_fit_mode("loglog"),
                      Catch::Matchers::ContainsSubstring("unknown fit mode 'loglog'"));
}

TEST_CASE("hierarchical_exponent known values and limits") {
    const HierarchicalExponent h59 = hierarchical_exponent(59);
    CHECK_THAT(h59.m, Catch::Matchers::WithinAbs(2.9661, 1e-3));
    CHECK_THAT(h59.alpha_hier, Catch::Matchers::WithinAbs(1.61, 5e-3));

    const HierarchicalExponent h3 = hierarchical_exponent(3);
    CHECK_THAT(h3.m, Catch::Matchers::WithinAbs(7.0 / 3.0, 1e-12));
    CHECK_THAT(h3.alpha_hier, Catch::Matchers::WithinAbs(2.9450, 1e-3));

    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n = 3; n <= 200; ++n) {
        const double a = hierarchical_exponent(n).alpha_hier;
        CHECK(a < previous);
        previous = a;
    }
    CHECK_THAT(hierarchical_exponent(100000000).alpha_hier,
               Catch::Matchers::WithinAbs(std::log(3.0) / std::log(2.0), 1e-6));
    CHECK_THROWS_AS(hierarchical_exponent(2), Error);
}

TEST_CASE("fit_beta recovers an exact relation") {
    const double a = 1.4, beta = 0.21, lambda_rm = 1.413;
    std::vector<ScatterPoint> pts;
    for (const double lam : {1.5, 1.7, 2.0, 2.5, 3.0, 4.0})
        pts.push_back({lam, a * std::pow(lam - lambda_rm, -beta)});
    const BetaFit fit = fit_beta(pts, lambda_rm);
    CHECK_THAT(fit.beta, Catch::Matchers::WithinAbs(beta, 1e-6));
    CHECK_THAT(fit.prefactor, Catch::Matchers::WithinAbs(a, 1e-6));
    CHECK(fit.sse < 1e-12);
    CHECK(fit.lambda_rm == lambda_rm);
}

TEST_CASE("fit_beta on constant alpha yields beta 0") {
    std::vector<ScatterPoint> pts;
    for (const double lam : {1.5, 1.9, 2.4, 3.0, 3.7, 5.0}) pts.push_back({lam, 1.3});
    const BetaFit fit = fit_beta(pts, 1.413);
    CHECK_THAT(fit.beta, Catch::Matchers::WithinAbs(0.0, 1e-6));
    CHECK_THAT(fit.prefactor, Catch::Matchers::WithinAbs(1.3, 1e-9));
}

TEST_CASE("fit_beta with zero offset matches log-log regression") {
    std::vector<ScatterPoint> pts;
    for (const double lam : {1.2, 1.5, 2.0, 3.0, 5.0, 8.0})
        pts.push_back({lam, 2.0 * std::pow(lam, -0.5)});
    const BetaFit fit = fit_beta(pts, 0.0);

    double sx = 0.0, sy = 0.0;
    for (const ScatterPoint& p : pts) {
        sx += std::log(p.lambda_max);
        sy += std::log(p.alpha);
    }
    const double mx = sx / pts.size(), my = sy / pts.size();
    double sxx = 0.0, sxy = 0.0;
    for (const ScatterPoint& p : pts) {
        const double dx = std::log(p.lambda_max) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(p.alpha) - my);
    }
    const double slope = sxy / sxx;
    CHECK_THAT(fit.beta, Catch::Matchers::WithinAbs(-slope, 1e-6));
    CHECK_THAT(fit.prefactor, Catch::Matchers::WithinAbs(std::exp(my - slope * mx), 1e-6));
}

TEST_CASE("fit_beta error paths") {
    std::vector<ScatterPoint> few = {{2.0, 1.0}, {3.0, 0.9}, {4.0, 0.8}, {5.0, 0.7}};
    CHECK_THROWS_WITH(fit_beta(few, 1.0), Catch::Matchers::ContainsSubstring("at least 5 points"));

    std::vector<ScatterPoint> pts;
    for (const double lam : {1.0, 1.7, 2.0, 2.5, 3.0}) pts.push_back({lam, 1.0});
    CHECK_THROWS_WITH(fit_beta(pts, 1.0),
                      Catch::Matchers::ContainsSubstring("lambda_max <= lambda_rm"));
}
