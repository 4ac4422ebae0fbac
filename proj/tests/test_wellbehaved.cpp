#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "equilib/error.hpp"
#include "equilib/wellbehaved.hpp"

using namespace equilib;

TEST_CASE("single charge parameters") {
    auto a = single_charge_params({1.0, {0.0, 0.0}}, 0.5);
    CHECK(a.params.B == 1);
    CHECK(a.params.C == 4);
    CHECK(a.params.beta_min == 1.0);
    auto b = single_charge_params({8.0, {0.0, 0.0}}, 1.0);
    CHECK(b.params.B == 3);
    CHECK(b.params.beta_min == 2.0);
    auto c = single_charge_params({1.0, {0.0, 0.0}}, 1.0);
    CHECK(c.params.B == 0);
    CHECK(c.params.derivative_bound(0, c.params.beta_min) == derivative_bound({1.0, {0.0, 0.0}}, 0, 1.0));
    CHECK_THROWS_AS(single_charge_params({1.0, {0.0}}, 0.0), InvalidTau);
    CHECK_THROWS_AS(single_charge_params({1.0, {0.0}}, -1.0), InvalidTau);

    const auto boxes = a.cover.boxes(0.75);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].lo[0] == -0.375);
    CHECK(boxes[0].hi[1] == 0.375);
}

TEST_CASE("derivative parameters") {
    const WellBehavedParams p{1, 4, 1.0};
    const auto d1 = derivative_params(p, 1);
    CHECK(d1.B == 4);
    CHECK(d1.C == 8);
    CHECK(derivative_params(p, 0) == p);
    const auto d2 = derivative_params({0, 4, 0.5}, 2);
    CHECK(d2.B == static_cast<int>(std::ceil(0 + 4 + 2 + 2 * std::log2(3.0))));
    CHECK(d2.C == 16);
}

TEST_CASE("sum and product parameters") {
    const auto w = single_charge_params({1.0, {0.0, 0.0}}, 0.5); // B=1, C=4
    auto one = sum_params({{1.0, w}});
    CHECK(one.params == w.params);
    auto two = sum_params({{1.0, w}, {1.0, w}});
    CHECK(two.params.B == 2);
    CHECK(two.params.C == 8);
    CHECK(two.cover.count(1.0) == 2);
    auto scaled = sum_params({{4.0, w}});
    CHECK(scaled.params.B == 3);
    CHECK_THROWS_AS(sum_params({}), EmptySum);

    auto p1 = product_params({w});
    CHECK(p1.params == w.params);
    WellBehaved w3{{3, 4, 1.0}, w.cover};
    auto p2 = product_params({w, w3});
    CHECK(p2.params.B == 4);
    CHECK(p2.params.C == 8);
    WellBehaved w2{{2, 4, 1.0}, w.cover};
    auto p4 = product_params({w2, w2, w2, w2});
    CHECK(p4.params.B == 8);
    CHECK(p4.params.C == 16);
    CHECK_THROWS_AS(product_params({}), EmptyProduct);
}

TEST_CASE("polynomial parameters") {
    CHECK(polynomial_params(1.0) == WellBehavedParams{0, 2, 2.0});
    CHECK(polynomial_params(16.0).B == 4);
    // p == 0: every derivative vanishes
    CHECK(polynomial_params(1.0).derivative_bound(3, 2.0) >= 0.0);
}

namespace {

// max |D^s g| over |s| = k for g = sum c_i f_i
double sampled(const std::vector<std::pair<double, Charge>>& terms, int k, const Point& x) {
    double m = 0.0;
    for (const auto& s : multi_indices_of_order(static_cast<int>(x.size()), k)) {
        double v = 0.0;
        for (const auto& [c, q] : terms) v += c * charge_partial(q, s, x).value;
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool in_cover(const CoverProvider& cp, double beta, const Point& x) {
    for (const auto& b : cp.boxes(beta))
        if (b.contains(x)) return true;
    return false;
}

} // namespace

TEST_CASE("sampled soundness for charges and sums") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const std::vector<Charge> qs{{1.0, {0.0, 0.0}}, {-2.0, {1.0, 0.0}}, {3.0, {0.0, 1.0}}};
    const double tau = 0.25;
    std::vector<ScaledItem> items;
    for (const auto& q : qs) items.push_back({1.0, single_charge_params(q, tau)});
    const auto sum = sum_params(items);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Point x{u(rng), u(rng)};
        for (double beta : {sum.params.beta_min, 2 * sum.params.beta_min, 4 * sum.params.beta_min}) {
            if (in_cover(sum.cover, beta, x)) continue;
            for (int k = 0; k <= 5; ++k) {
                std::vector<std::pair<double, Charge>> terms;
                for (const auto& q : qs) terms.push_back({1.0, q});
                if (sampled(terms, k, x) > sum.params.derivative_bound(k, beta)) ++violations;
                // each charge alone against its own parameters
                for (std::size_t i = 0; i < qs.size(); ++i) {
                    const auto& w = items[i].item;
                    if (in_cover(w.cover, beta, x) || beta < w.params.beta_min) continue;
                    if (sampled({{1.0, qs[i]}}, k, x) > w.params.derivative_bound(k, beta)) ++violations;
                }
            }
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("derivative family is sound on one charge") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Charge q{1.0, {0.0, 0.0}};
    const auto w = single_charge_params(q, 0.25);
    const auto d2 = derivative_params(w.params, 2);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Point x{u(rng), u(rng)};
        const double beta = std::min(1.0, w.params.beta_min);
        if (in_cover(w.cover, beta, x)) continue;
        // k-th derivative of a second partial is a (k+2)-th partial of f
        for (int k = 0; k <= 3; ++k)
            for (const auto& s : multi_indices_of_order(2, 2)) {
                double m = 0.0;
                for (const auto& t : multi_indices_of_order(2, k))
                    m = std::max(m, std::abs(charge_partial(q, s + t, x).value));
                if (m > d2.derivative_bound(k, beta)) ++violations;
            }
    }
    CHECK(violations == 0);
}
