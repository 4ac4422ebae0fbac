// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>

#include "equilib/equilibrium.hpp"
#include "equilib/error.hpp"
#include "equilib/grid.hpp"
#include "equilib/oracle.hpp"
#include "equilib/polysolve.hpp"
#include "equilib/taylor.hpp"

using namespace equilib;

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const double kRoot = std::sqrt(2.0) - 1.0;
ChargeSystem golden() { return ChargeSystem(2, {{1.0, {0.0, 0.0}}, {2.0, {1.0, 0.0}}}); }
Polytope golden_box() { return Polytope::from_box(Box({-0.5, -0.5}, {1.5, 0.5})); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

ChargeSystem random_system(std::mt19937_64& rng, int n, int d = 2) {
    std::uniform_real_distribution<double> pos(-2.0, 2.0), mag(1.0, 4.0), coin(0.0, 1.0);
    while (true) {
        std::vector<Charge> cs;
        for (int i = 0; i < n; ++i) {
            Point p(d);
            for (auto& v : p) v = pos(rng);
            cs.push_back({(coin(rng) < 0.3 ? -1.0 : 1.0) * mag(rng), p});
        }
        try {
            ChargeSystem s(d, cs);
            bool spread = true; // keep charges reasonably separated
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) spread &= dist_inf(cs[i].position, cs[j].position) > 0.3;
            if (spread) return s;
        } catch (const InvalidInput&) {
        }
    }
}

// ---------------------------------------------------------------- 1
Verdict criterion1() {
    const auto t0 = Clock::now();
    const auto a = solve_weak(golden(), golden_box(), 1e-6, 1e-8);
    const double t = seconds_since(t0);
    if (!a.found()) return {false, "no point returned"};
    const double dist = dist_inf(a.x, Point{kRoot, 0.0});
    return {dist <= 1e-5 && t < 30.0,
            fmt("x = (%.9f, %.3g), distance %.3g, residual %.3g", a.x[0], a.x[1], dist, a.residual) +
                fmt(", %.3f s", t)};
}

// ---------------------------------------------------------------- 2
Verdict criterion2() {
    const auto t0 = Clock::now();
    const auto r = solve_strong_auto(golden(), golden_box(), 1e-4);
    const double t = seconds_since(t0);
    if (!r.found()) return {false, "solve_strong_auto: " + r.reason};
    const auto& a = r.answer;
    const double dist = dist_inf(a.x, Point{kRoot, 0.0});
    const auto n = newton_refine(golden(), a.x, 10);
    const bool ok = a.certified && dist <= 1e-4 && n.converged && n.iterations <= 10;
    return {ok, fmt("certified %.0f, delta %.3g, distance %.3g", a.certified, a.delta, dist) +
                    fmt(", Newton %.0f iterations to %.3g", n.iterations, n.residual) + fmt(", %.3f s", t)};
}

// ---------------------------------------------------------------- 3
Verdict criterion3() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::size_t samples = 0, violations = 0;
    for (int inst = 0; inst < 5; ++inst) {
        const int n = 2 + inst % 3;
        const ChargeSystem sys = random_system(rng, n).normalized();
        for (double eps : {0.0, 0.1, 1.0}) {
            const double rho = exclusion_radius(sys, eps);
            for (const auto& c : sys.charges())
                for (int s = 0; s < 1000; ++s) {
                    const Point x{c.position[0] + rho * u(rng), c.position[1] + rho * u(rng)};
                    if (dist_inf(x, c.position) < kSingularGuard) continue;
                    ++samples;
                    if (!(norm_inf(eval_gradient(sys, x)) > eps)) ++violations;
                }
        }
    }
    return {violations == 0, fmt("%.0f samples, %.0f violations", samples, violations)};
}

// ---------------------------------------------------------------- 4
Verdict criterion4() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t cells = 0, samples = 0, violations = 0;
    // models arrive in normalized units: gradient components, then the determinant
    auto checker = [&](const ChargeSystem& sys) {
        auto funcs = std::make_shared<std::vector<std::unique_ptr<ModeledFunction>>>();
        const auto& nc = sys.normalized_charges();
        for (int j = 0; j < sys.dim(); ++j)
            funcs->push_back(std::make_unique<PotentialDerivative>(nc, MultiIndex::unit(sys.dim(), j)));
        funcs->push_back(std::make_unique<HessianDeterminant>(nc, sys.dim()));
        return [&, funcs](const CellReport& r) {
            ++cells;
            for (std::size_t m = 0; m < r.models.size(); ++m) {
                const auto& model = r.models[m];
                const auto& g = *(*funcs)[m];
                if (!(model.err <= model.budget)) ++violations;
                for (int s = 0; s < 100; ++s) {
                    Point x(r.cell.dim());
                    for (int j = 0; j < r.cell.dim(); ++j) x[j] = r.cell.lo[j] + u(rng) * r.cell.width(j);
                    ++samples;
                    if (!(std::abs(g.value(x) - model.poly(x)) <= model.budget)) ++violations;
                }
            }
        };
    };
    const ChargeSystem three(2, {{1.0, {0.0, 0.0}}, {1.5, {1.0, 0.25}}, {2.0, {0.25, 1.0}}});
    SolverOptions opt;
    opt.enumerate_all = true;
    opt.observer = checker(three);
    solve_weak(three, Polytope::from_box(Box({-0.5, -0.5}, {1.5, 1.5})), 1e-5, 1e-7, opt);
    const std::size_t weak_cells = cells;
    SolverOptions sopt;
    sopt.observer = checker(golden());
    solve_strong(golden(), golden_box(), 1e-4, 1.0, sopt);
    return {violations == 0 && weak_cells > 0 && cells > weak_cells,
            fmt("%.0f cells (%.0f weak, three charges), %.0f samples, %.0f violations of eps/4", cells, weak_cells,
                samples, violations)};
}

// ---------------------------------------------------------------- 5
Verdict criterion5() {
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const Charge c{1.7, {0.2, -0.3}};
    const ChargeSystem sys(2, {c});
    std::size_t checks = 0, fd_bad = 0, structure_bad = 0;
    double worst = 0.0;
    const auto indices = multi_indices_up_to(2, 4);
    for (const auto& s : indices) {
        const auto e = derivative_terms(c, s);
        const int k = s.order();
        for (const auto& t : e.terms)
            if (t.den_pow % 2 != 1 || t.den_pow > 2 * k + 1 || t.den_pow - t.num.order() != k + 1) ++structure_bad;
    }
    for (int p = 0; p < 100; ++p) {
        Point x{u(rng), u(rng)};
        const double r = dist2(x, c.position);
        if (r < 0.2) {
            --p;
            continue;
        }
        for (const auto& s : indices) {
            const double exact = derivative_terms(c, s).evaluate(x);
            // scale: the largest partial of the same order at x
            double scale = std::abs(exact);
            for (const auto& t : multi_indices_of_order(2, s.order()))
                scale = std::max(scale, std::abs(charge_partial(c, t, x).value));
            const double fd = finite_difference(sys, x, s);
            const double rel = std::abs(fd - exact) / scale;
            worst = std::max(worst, rel);
            ++checks;
            if (!(rel <= 1e-4)) ++fd_bad;
        }
    }
    return {fd_bad == 0 && structure_bad == 0,
            fmt("%.0f comparisons, worst relative error %.3g, %.0f FD failures, %.0f structure violations", checks,
                worst, fd_bad, structure_bad)};
}

// ---------------------------------------------------------------- 6
Verdict criterion6() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const std::vector<Charge> qs{{1.0, {0.0, 0.0}}, {-2.0, {1.0, 0.0}}, {3.0, {0.0, 1.0}}};
    const double tau = 0.25;
    std::vector<WellBehaved> singles;
    std::vector<ScaledItem> items;
    for (const auto& q : qs) {
        singles.push_back(single_charge_params(q, tau));
        items.push_back({1.0, singles.back()});
    }
    const WellBehaved sum = sum_params(items);
    // det of the Hessian: products of second partials, summed over permutations
    const WellBehaved entry{derivative_params(sum.params, 2), sum.cover};
    const WellBehaved prod = product_params({entry, entry});
    const WellBehaved det = sum_params({{1.0, prod}, {1.0, prod}}); // 2! permutation terms
    const HessianDeterminant hdet(qs, 2);

    auto outside = [](const WellBehaved& w, double beta, const Point& x) {
        for (const auto& b : w.cover.boxes(beta))
            if (b.contains(x)) return false;
        return true;
    };
    std::size_t checks = 0, violations = 0;
    for (int p = 0; p < 1000; ++p) {
        const Point x{u(rng), u(rng)};
        for (int mult : {1, 2, 4}) {
            // single charges
            for (std::size_t i = 0; i < qs.size(); ++i) {
                const double beta = singles[i].params.beta_min * mult;
                if (!outside(singles[i], beta, x)) continue;
                for (int k = 0; k <= 5; ++k) {
                    double m = 0.0;
                    for (const auto& s : multi_indices_of_order(2, k)) m = std::max(m, std::abs(charge_partial(qs[i], s, x).value));
                    ++checks;
                    if (m > singles[i].params.derivative_bound(k, beta)) ++violations;
                }
            }
            // the sum
            const double beta = sum.params.beta_min * mult;
            if (outside(sum, beta, x)) {
                const auto parts = potential_partials(qs, x, 5);
                for (int k = 0; k <= 5; ++k) {
                    double m = 0.0;
                    for (const auto& s : multi_indices_of_order(2, k)) m = std::max(m, std::abs(parts[graded_rank(s)].value));
                    ++checks;
                    if (m > sum.params.derivative_bound(k, beta)) ++violations;
                }
            }
            // the Hessian determinant
            const double bd = det.params.beta_min * mult;
            if (outside(det, bd, x)) {
                const auto series = hdet.series(x, 5);
                for (int k = 0; k <= 5; ++k) {
                    double m = 0.0;
                    for (const auto& s : multi_indices_of_order(2, k))
                        m = std::max(m, std::abs(series[graded_rank(s)].value) * s.factorial());
                    ++checks;
                    if (m > det.params.derivative_bound(k, bd)) ++violations;
                }
            }
        }
    }
    return {violations == 0, fmt("%.0f bound checks, %.0f violations", checks, violations)};
}

// ---------------------------------------------------------------- 7
Verdict criterion7() {
    std::mt19937_64 rng(707);
    std::uniform_real_distribution<double> u(-1.0, 1.0), rad(0.05, 0.6);
    std::size_t found = 0, infeasible = 0, wrong = 0;
    double worst_slack = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 2;
        // ball |x - c|^2 <= r^2 and half-space x_0 <= t: empty iff t < c_0 - r
        Point c(d);
        for (auto& v : c) v = u(rng);
        const double r = rad(rng), t = u(rng);
        std::vector<std::pair<MultiIndex, double>> terms{{MultiIndex(d), -r * r}};
        for (int j = 0; j < d; ++j) {
            terms.push_back({MultiIndex::unit(d, j, 2), 1.0});
            terms.push_back({MultiIndex::unit(d, j), -2.0 * c[j]});
            terms[0].second += c[j] * c[j];
        }
        const auto ball = Polynomial::from_terms(d, terms);
        const auto hs = Polynomial::from_terms(d, {{MultiIndex::unit(d, 0), 1.0}, {MultiIndex(d), -t}});
        const Box B(Point(d, -2.0), Point(d, 2.0));
        const double eps = 1e-3;
        const auto out = solve_system({ball, hs}, Polytope::from_box(B), B, eps);
        const bool empty = t < c[0] - r;
        const bool robust = t > c[0] - r / 2 + eps && 0.75 * r * r > eps;
        if (out.found()) {
            ++found;
            const double slack = std::max(ball(out.point), hs(out.point));
            worst_slack = std::max(worst_slack, slack);
            if (empty || !(slack <= 1e-12)) ++wrong;
        } else {
            ++infeasible;
            if (robust) ++wrong;
        }
    }
    return {wrong == 0, fmt("%.0f found, %.0f infeasible, %.0f wrong, worst residual %.3g", found, infeasible, wrong,
                            worst_slack)};
}

// ---------------------------------------------------------------- 8
Verdict criterion8() {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> off(-0.5, 0.5);
    const double h = 1e-3, eps = 1e-3, delta = 1e-4;
    int points = 0, nodelta = 0, disagree = 0;
    std::string notes;
    for (int inst = 0; inst < 10; ++inst) {
        const int n = 2 + inst % 2;
        const ChargeSystem sys = random_system(rng, n);
        // a 1 x 1 window around a random point between the charges
        Point mid(2, 0.0);
        for (const auto& c : sys.charges())
            for (int j = 0; j < 2; ++j) mid[j] += c.position[j] / n;
        const Point lo{mid[0] + off(rng) - 0.5, mid[1] + off(rng) - 0.5};
        const Polytope X = Polytope::from_box(Box(lo, {lo[0] + 1.0, lo[1] + 1.0}));
        const auto a = solve_weak(sys, X, eps, delta);
        if (a.found()) {
            ++points;
            // a scan point within h of x has gradient at most ||grad f(x)|| + h sqrt(d) ||H||
            const auto H = hessian(sys, a.x);
            double hn = 0.0;
            for (int i = 0; i < 2; ++i) hn = std::max(hn, std::abs(H[2 * i]) + std::abs(H[2 * i + 1]));
            const double threshold = eps + h * std::sqrt(2.0) * hn * 1.01;
            const auto scan = brute_force_scan(sys, X, threshold, h);
            const double radius = h + eps / std::max(hn, 1e-300);
            bool near = false;
            for (const auto& p : scan.points) near |= dist_inf(p.x, a.x) <= radius;
            if (!near) ++disagree;
        } else {
            ++nodelta;
            const auto scan = brute_force_scan(sys, X, delta, h);
            if (!scan.points.empty()) ++disagree;
        }
    }
    return {disagree == 0,
            fmt("%.0f instances with a point, %.0f with no delta-solution, %.0f disagreements", points, nodelta, disagree)};
}

// ---------------------------------------------------------------- 9
Verdict criterion9() {
    std::mt19937_64 rng(909);
    bool ok = true;
    std::string detail;
    for (int n = 1; n <= 5; ++n) {
        const ChargeSystem sys = random_system(rng, n);
        const Polytope X = Polytope::from_box(Box({-2.5, -2.5}, {2.5, 2.5}));
        const auto t0 = Clock::now();
        const WeakGrid g = weak_grid(sys, X, 1e-6);
        const double t = seconds_since(t0);
        std::size_t cells = 0, max_cuts = 0;
        bool within = true;
        for (std::size_t p = 0; p < g.pieces.size(); ++p) {
            cells += g.cuts[p].cell_count();
            const std::size_t bound = axis_cut_bound({g.gradient}, g.pieces[p].region);
            for (const auto& axis : g.cuts[p].cuts) {
                max_cuts = std::max(max_cuts, axis.size());
                within &= axis.size() <= bound;
            }
        }
        const bool pass = within && cells < 1'000'000 && t < 5.0;
        ok &= pass;
        detail += fmt("n=%.0f: cells %.3g, max cuts/axis %.0f, ", n, static_cast<double>(cells), max_cuts) +
                  (within ? "within cut bound" : "ABOVE cut bound") + fmt(", %.2f s; ", t);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- 10
Verdict criterion10() {
    const auto p = strong_params(1, 4, 1.0, 1.0, 0.1, 2);
    auto sig4 = [](double a, double b) { return std::abs(a - b) <= 5e-4 * std::abs(b); };
    const bool ok = sig4(p.delta_prime, 3.90625e-3) && sig4(p.alpha, 9.5367e-7) && sig4(p.eps_prime, 6.985e-10);
    return {ok, fmt("delta' = %.6g, alpha = %.6g, eps' = %.6g", p.delta_prime, p.alpha, p.eps_prime)};
}

} // namespace

int main() {
    const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9, criterion10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
