#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "equilib/error.hpp"
#include "equilib/taylor.hpp"

using namespace equilib;

TEST_CASE("taylor degree") {
    CHECK(taylor_degree(4, std::ldexp(1.0, -10)) == 17);
    CHECK(taylor_degree(0, 8.0) == 1);
    CHECK(taylor_degree(1, 1.0) == 4);
    int prev = 0;
    for (double eps = 1.0; eps > 1e-12; eps /= 2) {
        const int k = taylor_degree(3, eps);
        CHECK(k >= prev);
        prev = k;
    }
}

TEST_CASE("constant function") {
    const PolynomialFunction g(Polynomial::constant(2, 3.5));
    const Box cell({0.0, 0.0}, {1.0, 1.0});
    const auto m = expand(g, cell, Point{0.5, 0.5}, 5);
    CHECK(m.poly(Point{0.1, 0.9}) == 3.5);
    CHECK(m.truncation == 0.0);
    CHECK(m.err <= 1e-15); // only the certified rounding allowance
    for (double t : {0.0, 0.3, 1.0}) CHECK(std::abs(m.poly(Point{t, 1.0 - t}) - 3.5) <= m.err);
}

TEST_CASE("series of 1/r about r = 2") {
    const PotentialDerivative g({{1.0, {0.0}}}, MultiIndex(1));
    const auto m = expand(g, Box({1.9}, {2.1}), Point{2.0}, 3);
    CHECK(m.poly.coefficient(MultiIndex{0}) == doctest::Approx(0.5));
    CHECK(m.poly.coefficient(MultiIndex{1}) == doctest::Approx(-0.25));
    CHECK(m.poly.coefficient(MultiIndex{2}) == doctest::Approx(0.125));
    CHECK(m.poly(Point{2.0}) == m.poly.coefficient(MultiIndex{0}));
}

TEST_CASE("sampled error stays within the certified bound") {
    std::mt19937_64 rng(21);
    const std::vector<Charge> cs{{1.0, {0.0, 0.0}}, {-2.0, {1.0, 0.0}}, {1.5, {0.0, 1.0}}};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const Point lo{0.2 + 0.4 * u(rng), 0.2 + 0.4 * u(rng)};
        const Box cell(lo, {lo[0] + 0.05, lo[1] + 0.03});
        const Point anchor = cell.center();
        for (int j = 0; j < 2; ++j) {
            const PotentialDerivative g(cs, MultiIndex::unit(2, j));
            const auto m = expand_within(g, cell, anchor, 1e-6);
            CHECK(m.err <= 1e-6 / 4);
            for (int s = 0; s < 1000; ++s) {
                const Point x{cell.lo[0] + u(rng) * cell.width(0), cell.lo[1] + u(rng) * cell.width(1)};
                if (std::abs(g.value(x) - m.poly(x)) > m.err) ++violations;
            }
        }
        const HessianDeterminant h(cs, 2);
        const auto mh = expand_within(h, cell, anchor, 1e-3);
        for (int s = 0; s < 300; ++s) {
            const Point x{cell.lo[0] + u(rng) * cell.width(0), cell.lo[1] + u(rng) * cell.width(1)};
            if (std::abs(h.value(x) - mh.poly(x)) > mh.err) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("remainder dominates the Lagrange estimate") {
    // max M^(k) * sum_{|s|=k} |x - anchor|^s / s! with M^(k) from derivative_bound
    const Charge c{1.0, {0.0, 0.0}};
    const PotentialDerivative g({c}, MultiIndex(2));
    const Box cell({0.5, 0.5}, {0.6, 0.55});
    const Point a = cell.center();
    const double r = std::sqrt(0.5 * 0.5 + 0.5 * 0.5);
    for (int k = 1; k <= 8; ++k) {
        double lag = 0.0;
        for (const auto& s : multi_indices_of_order(2, k))
            lag += std::pow(0.05, s[0]) * std::pow(0.025, s[1]) / s.factorial();
        lag *= derivative_bound(c, k, r);
        const auto m = expand(g, cell, a, k);
        CHECK(m.truncation >= 0.0);
        // sampled truncation error is below both bounds
        for (const auto& x : {cell.lo, cell.hi, Point{cell.lo[0], cell.hi[1]}}) {
            const double e = std::abs(g.value(x) - m.poly(x));
            CHECK(e <= m.err);
            CHECK(e <= lag + m.rounding);
        }
    }
}

TEST_CASE("lipschitz bound") {
    const Box box({0.0, 0.0}, {2.0, 1.0});
    CHECK(lipschitz_bound(Polynomial::constant(2, 7.0), box) == 0.0);
    const auto x1 = Polynomial::from_terms(2, {{MultiIndex{1, 0}, 1.0}});
    CHECK(lipschitz_bound(x1, box) == doctest::Approx(1.0));
    const auto sq = Polynomial::from_terms(1, {{MultiIndex{2}, 1.0}});
    const double L = lipschitz_bound(sq, Box({0.0}, {2.0}));
    CHECK(L >= 4.0);
    CHECK(L == doctest::Approx(4.0));
}

TEST_CASE("precision limit is reported") {
    const PotentialDerivative g({{1.0, {0.0, 0.0}}}, MultiIndex{1, 0});
    CHECK_THROWS_AS(expand_within(g, Box({1.0, 1.0}, {1.1, 1.1}), Point{1.05, 1.05}, 1e-25), PrecisionLimit);
}
