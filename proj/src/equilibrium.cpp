#include "equilib/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <thread>

#include <Eigen/Dense>

#include "equilib/enclosure.hpp"
#include "equilib/error.hpp"
#include "equilib/grid.hpp"

namespace equilib {

namespace {

std::string cell_id(std::size_t piece, const std::array<int, kMaxDim>& idx, int d) {
    std::string s = "piece " + std::to_string(piece) + " cell (";
    for (int j = 0; j < d; ++j) s += (j ? "," : "") + std::to_string(idx[j]);
    return s + ")";
}

struct Survivor {
    std::size_t piece = 0;
    std::array<int, kMaxDim> index{};
    Box box;
    int mask = 1; // strong solver: bit 0 = det >= , bit 1 = det <=
};

// Hierarchical pre-filter over index blocks of one piece's grid. `prune`
// returns a nonzero mask when the block may still contain a solution.
template <class Prune>
void block_search(const AxisCuts& cuts, const Polytope& region, std::size_t piece, Prune&& prune,
                  std::vector<Survivor>& out, SolveStats& stats) {
    const int d = cuts.dim();
    std::array<int, kMaxDim> lo{}, hi{};
    for (int j = 0; j < d; ++j) hi[j] = std::max<int>(1, static_cast<int>(cuts.cuts[j].size()) - 1);
    stats.grid_cells += cuts.cell_count();

    auto box_of = [&](const std::array<int, kMaxDim>& a, const std::array<int, kMaxDim>& b) {
        Box box{Point(d), Point(d)};
        for (int j = 0; j < d; ++j) {
            const auto& c = cuts.cuts[j];
            box.lo[j] = c[a[j]];
            box.hi[j] = c.size() == 1 ? c[0] : c[b[j]];
        }
        return box;
    };
    std::function<void(std::array<int, kMaxDim>, std::array<int, kMaxDim>)> rec = [&](auto a, auto b) {
        ++stats.blocks;
        const Box box = box_of(a, b);
        if (!region.intersects(box)) return;
        const int mask = prune(box);
        if (mask == 0) return;
        int axis = -1, count = 1;
        for (int j = 0; j < d; ++j)
            if (b[j] - a[j] > count) {
                count = b[j] - a[j];
                axis = j;
            }
        if (axis < 0) {
            out.push_back({piece, a, box, mask});
            return;
        }
        const int mid = a[axis] + count / 2;
        auto b1 = b, a2 = a;
        b1[axis] = mid;
        a2[axis] = mid;
        rec(a, b1);
        rec(a2, b);
    };
    rec(lo, hi);
}

void sort_survivors(std::vector<Survivor>& s) {
    std::sort(s.begin(), s.end(), [](const Survivor& x, const Survivor& y) {
        if (x.piece != y.piece) return x.piece < y.piece;
        return x.index < y.index;
    });
}

// Runs `work` over items in chunks of `threads`, then hands results to `sink`
// in item order; sink returns false to stop.
template <class Item, class Result, class Work, class Sink>
void ordered_parallel(const std::vector<Item>& items, unsigned threads, Work&& work, Sink&& sink) {
    threads = std::max(1u, threads);
    for (std::size_t start = 0; start < items.size(); start += threads) {
        const std::size_t end = std::min(items.size(), start + threads);
        std::vector<std::optional<Result>> results(end - start);
        std::vector<std::exception_ptr> errors(end - start);
        auto run = [&](std::size_t i) {
            try {
                results[i - start] = work(items[i]);
            } catch (...) {
                errors[i - start] = std::current_exception();
            }
        };
        if (end - start == 1) {
            run(start);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t i = start; i < end; ++i) pool.emplace_back(run, i);
        }
        for (std::size_t i = start; i < end; ++i) {
            if (errors[i - start]) std::rethrow_exception(errors[i - start]);
            if (!sink(items[i], *results[i - start])) return;
        }
    }
}

struct Setup {
    ChargeSystem ns;
    Polytope Xn;
    double rho = 0.0;
    std::vector<DomainPiece> pieces;
    WellBehaved f;
};

Setup make_setup(const ChargeSystem& sys, const Polytope& X, double exclusion_eps) {
    if (X.dim() != sys.dim()) throw InvalidInput("domain and charges differ in dimension");
    if (X.empty()) throw EmptyPolytope("domain is empty");
    Setup s{sys.normalized(), X.scaled(sys.scale_x()), 0.0, {}, {}};
    // One charge: the same bound follows directly from |grad f| = |q| / r^2.
    s.rho = sys.size() >= 2 ? exclusion_radius(s.ns, exclusion_eps)
                            : exclusion_radius_formula(sys.dim(), 1, s.ns.q_max(), exclusion_eps);
    s.pieces = split_domain(s.Xn, s.ns, s.rho);
    std::vector<ScaledItem> items;
    for (const auto& c : s.ns.charges()) items.push_back({1.0, single_charge_params(c, std::min(s.rho, 1.0))});
    s.f = sum_params(items);
    return s;
}

bool gradient_within(const ChargeSystem& sys, std::span<const double> x, double eps, Point& grad) {
    const auto parts = potential_partials(sys.charges(), x, 1);
    grad.assign(sys.dim(), 0.0);
    bool ok = true;
    for (int j = 0; j < sys.dim(); ++j) {
        const auto& p = parts[1 + j];
        grad[j] = p.value;
        if (!(std::abs(p.value) + p.error <= eps)) ok = false;
    }
    return ok;
}

std::vector<Polynomial> band(const Polynomial& T, double bound) {
    // T <= bound and -T <= bound
    return {T.plus_constant(-bound), (-T).plus_constant(-bound)};
}

} // namespace

WeakGrid weak_grid(const ChargeSystem& sys, const Polytope& X, double exclusion_eps) {
    Setup s = make_setup(sys, X, exclusion_eps * sys.gradient_scale());
    WeakGrid g;
    g.rho = s.rho;
    g.potential = s.f;
    g.gradient = {derivative_params(s.f.params, 1), s.f.cover};
    g.pieces = s.pieces;
    for (const auto& p : g.pieces) g.cuts.push_back(build_axis_cuts({g.gradient}, p.region));
    return g;
}

// ---------------------------------------------------------------- weak

WeakAnswer solve_weak(const ChargeSystem& sys, const Polytope& X, double eps, double delta,
                      const SolverOptions& options) {
    if (!(delta > 0.0) || !(eps > delta)) throw InvalidInput("solve_weak needs eps > delta > 0");
    const int d = sys.dim();
    const double gs = sys.gradient_scale();
    const double eps_n = eps * gs, delta_n = delta * gs;
    const double eta = eps_n - delta_n;

    Setup s = make_setup(sys, X, delta_n);
    WeakAnswer ans;
    ans.epsilon = eps;
    ans.delta = delta;
    ans.stats.rho = s.rho;
    ans.stats.potential = s.f.params;
    const WellBehaved grad{derivative_params(s.f.params, 1), s.f.cover};
    ans.stats.gradient = grad.params;
    ans.stats.nominal_degree = taylor_degree(grad.params.B, eta);
    ans.stats.pieces = s.pieces.size();

    const auto& nc = s.ns.charges();
    std::vector<Survivor> survivors;
    for (std::size_t p = 0; p < s.pieces.size(); ++p) {
        const auto cuts = build_axis_cuts({grad}, s.pieces[p].region);
        block_search(
            cuts, s.pieces[p].region, p,
            [&](const Box& box) {
                for (const auto& g : gradient_enclosure(nc, box))
                    if (g.lo > delta_n || g.hi < -delta_n) return 0;
                return 1;
            },
            survivors, ans.stats);
    }
    sort_survivors(survivors);

    std::vector<PotentialDerivative> comps;
    for (int j = 0; j < d; ++j) comps.emplace_back(nc, MultiIndex::unit(d, j));

    auto work = [&](const Survivor& sv) {
        CellReport rep;
        rep.piece = sv.piece;
        rep.index = sv.index;
        rep.cell = sv.box;
        const auto& region = s.pieces[sv.piece].region;
        auto anchor = cell_anchor(sv.box, region);
        if (!anchor) return rep;
        rep.anchor = *anchor;
        try {
            std::vector<Polynomial> polys;
            for (int j = 0; j < d; ++j) {
                rep.models.push_back(expand_within(comps[j], sv.box, rep.anchor, eta));
                for (auto& p : band(rep.models.back().poly, eps_n - eta / 4)) polys.push_back(std::move(p));
            }
            rep.outcome = solve_system(polys, region, sv.box, eta / 2, {options.budget});
        } catch (BudgetExceeded& e) {
            e.set_cell(cell_id(sv.piece, sv.index, d));
            throw;
        }
        return rep;
    };
    bool done = false;
    ordered_parallel<Survivor, CellReport>(survivors, options.threads, work, [&](const Survivor&, CellReport& rep) {
        if (rep.models.empty()) return true;
        ++ans.stats.cells_modeled;
        ans.stats.kernel_boxes += rep.outcome.boxes;
        if (options.observer) options.observer(rep);
        if (!rep.outcome.found()) return true;
        const Point x = sys.from_normalized(rep.outcome.point);
        Point g;
        if (!gradient_within(sys, x, eps, g)) return true; // rounding in the unit change; keep looking
        if (!done) {
            done = true;
            ans.kind = WeakAnswer::Kind::Point;
            ans.x = x;
            ans.gradient = g;
            ans.residual = norm_inf(g);
        }
        ans.all_points.push_back(x);
        return options.enumerate_all;
    });
    return ans;
}

// ---------------------------------------------------------------- strong

StrongParams strong_params(double B, double C, double beta_min, double delta, double eps, int d) {
    if (!(C > 0.0) || !(beta_min > 0.0) || !(delta > 0.0) || !(eps > 0.0) || d < 1)
        throw InvalidInput("strong_params needs positive inputs");
    StrongParams p;
    const double two_b = std::exp2(B);
    p.delta_prime = (delta / 2) * std::pow(beta_min * beta_min / (2.0 * d * C * C * two_b), d - 1);
    p.alpha = std::min(eps / std::sqrt(static_cast<double>(d)),
                       p.delta_prime * beta_min * beta_min * beta_min / (8.0 * d * d * C * C * C * two_b));
    p.eps_prime = 3.0 / 16.0 * p.delta_prime * p.alpha;
    return p;
}

namespace {

// Strong-solver parameters from well-behaved parameters valid near one cell.
StrongParams local_params(const std::vector<Charge>& nc, const Box& cell, double rho, double eps_n, double delta_n,
                          int d) {
    const double margin = std::min(eps_n / std::sqrt(static_cast<double>(d)), rho / 2);
    const Box region = cell.inflated(margin);
    std::vector<ScaledItem> items;
    for (const auto& c : nc) {
        // sup-norm distance from the inflated cell to the charge
        double dist = 0.0;
        for (int j = 0; j < d; ++j)
            dist = std::max({dist, region.lo[j] - c.position[j], c.position[j] - region.hi[j]});
        items.push_back({1.0, single_charge_params(c, std::clamp(dist, rho / 2, 1.0))});
    }
    const WellBehaved f = sum_params(items);
    StrongParams p = strong_params(f.params.B, static_cast<double>(f.params.C), f.params.beta_min, delta_n, eps_n, d);
    if (p.alpha > margin) {
        p.alpha = margin;
        p.eps_prime = 3.0 / 16.0 * p.delta_prime * p.alpha;
    }
    return p;
}

WellBehaved determinant_params(const WellBehaved& f, int d) {
    const WellBehaved entry{derivative_params(f.params, 2), f.cover};
    std::vector<WellBehaved> factors(d, entry);
    const WellBehaved prod = product_params(factors);
    std::vector<ScaledItem> terms;
    int perms = 1;
    for (int i = 2; i <= d; ++i) perms *= i;
    for (int i = 0; i < perms; ++i) terms.push_back({1.0, prod});
    return sum_params(terms);
}

} // namespace

StrongResult solve_strong(const ChargeSystem& sys, const Polytope& X, double eps, double delta,
                          const SolverOptions& options) {
    if (!(eps > 0.0) || !(delta > 0.0)) throw InvalidInput("solve_strong needs eps > 0 and delta > 0");
    const int d = sys.dim();
    const double eps_n = eps * sys.scale_x();
    const double delta_n = delta * std::pow(sys.hessian_scale(), d);
    const double gs = sys.gradient_scale();

    // eps' < 1 always holds below, so the radius for eps = 1 excludes every eps'-point.
    Setup s = make_setup(sys, X, 1.0);
    StrongResult res;
    res.stats.rho = s.rho;
    res.stats.potential = s.f.params;
    const WellBehaved grad{derivative_params(s.f.params, 1), s.f.cover};
    const WellBehaved det = determinant_params(s.f, d);
    res.stats.gradient = grad.params;
    res.stats.determinant = det.params;
    res.stats.pieces = s.pieces.size();
    res.global = strong_params(s.f.params.B, static_cast<double>(s.f.params.C), s.f.params.beta_min, delta_n, eps_n, d);
    if (!(res.global.eps_prime > 0.0) || !std::isfinite(res.global.eps_prime)) {
        res.status = StrongResult::Status::Exhausted;
        res.reason = "eps' underflows double precision";
        return res;
    }
    res.stats.nominal_degree = taylor_degree(grad.params.B, res.global.eps_prime);

    const auto& nc = s.ns.charges();
    // eps' <= (3/16) (delta/2) (eps/sqrt d) on every cell
    const double eps_cap = std::min(1.0, 3.0 * delta_n * eps_n / (32.0 * std::sqrt(static_cast<double>(d))));
    std::vector<Survivor> survivors;
    for (std::size_t p = 0; p < s.pieces.size(); ++p) {
        const auto cuts = build_axis_cuts({grad, det}, s.pieces[p].region);
        block_search(
            cuts, s.pieces[p].region, p,
            [&](const Box& box) {
                for (const auto& g : gradient_enclosure(nc, box))
                    if (g.lo > eps_cap || g.hi < -eps_cap) return 0;
                const Interval D = hessian_det_enclosure(nc, box);
                int mask = 0;
                if (D.hi >= delta_n / 2) mask |= 1;
                if (D.lo <= -delta_n / 2) mask |= 2;
                return mask;
            },
            survivors, res.stats);
    }
    sort_survivors(survivors);

    std::vector<PotentialDerivative> comps;
    for (int j = 0; j < d; ++j) comps.emplace_back(nc, MultiIndex::unit(d, j));
    const HessianDeterminant hdet(nc, d);

    struct CellResult {
        std::vector<CellReport> reports;
        std::optional<StrongAnswer> answer;
    };
    auto work = [&](const Survivor& sv) {
        CellResult out;
        const auto& region = s.pieces[sv.piece].region;
        auto anchor = cell_anchor(sv.box, region);
        if (!anchor) return out;
        const StrongParams lp = local_params(nc, sv.box, s.rho, eps_n, delta_n, d);
        const double ep = lp.eps_prime;
        try {
            std::vector<TaylorModel> models;
            for (int j = 0; j < d; ++j) models.push_back(expand_within(comps[j], sv.box, *anchor, ep));
            models.push_back(expand_within(hdet, sv.box, *anchor, delta_n / 2));
            for (int sign : {+1, -1}) {
                if (!(sv.mask & (sign > 0 ? 1 : 2))) continue;
                CellReport rep;
                rep.piece = sv.piece;
                rep.index = sv.index;
                rep.cell = sv.box;
                rep.anchor = *anchor;
                rep.branch = sign;
                rep.models = models;
                std::vector<Polynomial> polys;
                for (int j = 0; j < d; ++j)
                    for (auto& p : band(models[j].poly, ep - ep / 4)) polys.push_back(std::move(p));
                // sign * det >= delta/2 with the det model's own error budget delta/8,
                // rescaled so that its gap matches eps'/2
                const double scale = (ep / 2) / (delta_n / 4);
                polys.push_back(models[d].poly.scaled(-sign * scale).plus_constant(scale * (delta_n / 2 + delta_n / 8)));
                rep.outcome = solve_system(polys, region, sv.box, ep / 2, {options.budget});
                out.reports.push_back(rep);
                if (rep.outcome.found()) {
                    StrongAnswer a;
                    a.x = sys.from_normalized(rep.outcome.point);
                    a.radius = eps;
                    a.alpha = lp.alpha / sys.scale_x();
                    a.eps_prime = ep / gs;
                    a.delta = delta;
                    a.sign = sign;
                    a.hessian_det = hessian_det(sys, a.x);
                    a.certified = certify_pm(s.ns, rep.outcome.point, lp.alpha);
                    out.answer = a;
                    break;
                }
            }
        } catch (BudgetExceeded& e) {
            e.set_cell(cell_id(sv.piece, sv.index, d));
            throw;
        }
        return out;
    };
    std::optional<StrongAnswer> fallback;
    ordered_parallel<Survivor, CellResult>(survivors, options.threads, work, [&](const Survivor&, CellResult& r) {
        for (const auto& rep : r.reports) {
            ++res.stats.cells_modeled;
            res.stats.kernel_boxes += rep.outcome.boxes;
            if (options.observer) options.observer(rep);
        }
        if (!r.answer) return true;
        if (r.answer->certified) {
            res.status = StrongResult::Status::Found;
            res.answer = *r.answer;
            return false;
        }
        if (!fallback) fallback = r.answer;
        return true;
    });
    if (res.found()) return res;
    if (fallback) {
        res.status = StrongResult::Status::Found;
        res.answer = *fallback;
        res.reason = "found but the Poincare-Miranda check was inconclusive";
        return res;
    }
    res.status = StrongResult::Status::NotFound;
    res.reason = "no delta-strongly non-degenerate equilibrium in the domain";
    return res;
}

StrongResult solve_strong_auto(const ChargeSystem& sys, const Polytope& X, double eps, const SolverOptions& options,
                               double delta_floor) {
    StrongResult last;
    std::optional<StrongResult> uncertified;
    double delta = 1.0;
    for (; delta >= delta_floor; delta /= 2) {
        try {
            last = solve_strong(sys, X, eps, delta, options);
        } catch (const PrecisionLimit& e) {
            last = StrongResult{};
            last.status = StrongResult::Status::Exhausted;
            last.reason = e.what();
            break;
        }
        if (last.found() && last.answer.certified) return last;
        if (last.found() && !uncertified) uncertified = last;
        if (last.status == StrongResult::Status::Exhausted) break;
    }
    if (uncertified) return *uncertified;
    last.status = StrongResult::Status::Exhausted;
    last.delta_floor = std::max(delta, delta_floor);
    if (last.reason.empty() || last.reason.rfind("no delta", 0) == 0)
        last.reason = "no certified point for any delta down to the floor";
    return last;
}

// ---------------------------------------------------------------- Poincare-Miranda

PmReport certify_pm_report(const ChargeSystem& sys, std::span<const double> x, double alpha, double spacing) {
    const int d = sys.dim();
    if (!(alpha > 0.0)) throw InvalidInput("alpha must be positive");
    PmReport rep;
    Box box(Point(x.begin(), x.end()), Point(x.begin(), x.end()));
    for (int j = 0; j < d; ++j) {
        box.lo[j] = round_down(x[j] - alpha);
        box.hi[j] = round_up(x[j] + alpha);
    }
    // half-widths actually covered, both rounded outward / inward
    double a_out = 0.0, a_in = INFINITY;
    for (int j = 0; j < d; ++j) {
        a_out = std::max({a_out, round_up(box.hi[j] - x[j]), round_up(x[j] - box.lo[j])});
        a_in = std::min({a_in, round_down(box.hi[j] - x[j]), round_down(x[j] - box.lo[j])});
    }
    double M2 = 0.0, M3 = 0.0;
    for (const auto& c : sys.charges()) {
        const double r = box.distance2_to(c.position) * (1.0 - 1e-14);
        if (!(r > 0.0)) return rep; // box touches a charge
        M2 += derivative_bound(c, 2, r);
        M3 += derivative_bound(c, 3, r);
    }
    const auto parts = potential_partials(sys.charges(), x, 2);
    std::vector<Interval> g0(d);
    std::vector<Interval> A(static_cast<std::size_t>(d * d));
    Eigen::MatrixXd Am(d, d);
    for (int j = 0; j < d; ++j) {
        const auto& p = parts[graded_rank(MultiIndex::unit(d, j))];
        g0[j] = Interval::around(p.value, p.error);
        for (int k = 0; k < d; ++k) {
            const auto& h = parts[graded_rank(MultiIndex::unit(d, j).plus(k))];
            A[j * d + k] = Interval::around(h.value, h.error);
            Am(j, k) = h.value;
        }
    }
    rep.det = Am.determinant();
    const double scale = std::pow(Am.cwiseAbs().maxCoeff(), d);
    if (!(std::abs(rep.det) > 1e-300 * std::max(1.0, scale))) throw SingularHessian("Hessian is singular at x");
    const Eigen::MatrixXd Minv = Am.inverse();

    rep.bound.assign(d, 0.0);
    std::vector<double> row_l1(d, 0.0);
    bool ok = true;
    for (int j = 0; j < d; ++j) {
        Interval r(0.0);
        for (int k = 0; k < d; ++k) {
            r += Interval(Minv(j, k)) * g0[k];
            row_l1[j] = round_up(row_l1[j] + std::abs(Minv(j, k)));
        }
        double lin = 0.0;
        for (int k = 0; k < d; ++k) {
            Interval e(j == k ? -1.0 : 0.0);
            for (int i = 0; i < d; ++i) e += Interval(Minv(j, i)) * A[i * d + k];
            lin = round_up(lin + e.mag());
        }
        const double quad = row_l1[j] * 0.5 * d * d * a_out * a_out * M3;
        rep.bound[j] = round_up(round_up(r.mag() + lin * a_out) + quad * (1.0 + 1e-12));
        if (!(rep.bound[j] < a_in)) ok = false;
    }
    if (ok) {
        rep.certified = true;
        rep.analytic = true;
        return rep;
    }

    // Fallback: sample every face and keep a Lipschitz margin.
    if (!(spacing > 0.0)) spacing = alpha / 8;
    int per_axis = std::max(2, static_cast<int>(std::ceil(2 * alpha / spacing)) + 1);
    const int max_per_axis = d <= 1 ? 1 : static_cast<int>(std::pow(1 << 20, 1.0 / (d - 1)));
    per_axis = std::min(per_axis, std::max(2, max_per_axis));
    const double step = 2 * alpha / (per_axis - 1);
    for (int j = 0; j < d; ++j) {
        const double margin = row_l1[j] * M2 * (d - 1) * step / 2 * (1.0 + 1e-12);
        for (int side : {-1, +1}) {
            std::array<int, kMaxDim> idx{};
            while (true) {
                Point p(x.begin(), x.end());
                p[j] = side > 0 ? box.hi[j] : box.lo[j];
                int f = 0;
                for (int k = 0; k < d; ++k) {
                    if (k == j) continue;
                    p[k] = std::clamp(box.lo[k] + idx[f++] * step, box.lo[k], box.hi[k]);
                }
                const auto gp = potential_partials(sys.charges(), p, 1);
                Interval h(0.0);
                for (int k = 0; k < d; ++k)
                    h += Interval(Minv(j, k)) * Interval::around(gp[1 + k].value, gp[1 + k].error);
                ++rep.samples;
                const double signed_lo = side > 0 ? h.lo : -h.hi;
                if (!(signed_lo > margin)) return rep;
                int k = d - 2;
                while (k >= 0 && ++idx[k] == per_axis) idx[k--] = 0;
                if (k < 0) break;
            }
        }
    }
    rep.certified = true;
    return rep;
}

bool certify_pm(const ChargeSystem& sys, std::span<const double> x, double alpha) {
    return certify_pm_report(sys, x, alpha).certified;
}

} // namespace equilib
