#include "equilib/polysolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "equilib/error.hpp"

namespace equilib {

namespace {

// Widest axis, ties to the lowest index; -1 when no axis can be halved.
int split_axis(const Box& b) {
    int best = -1;
    double w = -1.0;
    for (int j = 0; j < b.dim(); ++j) {
        const double mid = 0.5 * (b.lo[j] + b.hi[j]);
        if (!(mid > b.lo[j] && mid < b.hi[j])) continue;
        if (b.width(j) > w) {
            w = b.width(j);
            best = j;
        }
    }
    return best;
}

Point anchor_in(const Box& b, const Polytope& X) {
    const Point c = b.center();
    if (X.as_box()) return X.as_box()->intersection(b).clamp(c);
    if (X.contains(c, 0.0)) return c;
    return project(c, X, &b);
}

} // namespace

SolveOutcome solve_system(const std::vector<Polynomial>& polys, const Polytope& X, const Box& box, double eps,
                          const KernelOptions& options) {
    if (!(eps > 0.0)) throw InvalidInput("kernel gap must be positive");
    SolveOutcome out;
    out.threshold = eps;
    const std::size_t n = polys.size();
    std::vector<PreparedPolynomial> prep;
    prep.reserve(n);
    for (const auto& p : polys) prep.emplace_back(p);

    std::vector<double> L(n);
    double Lmax = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        L[l] = lipschitz_bound(polys[l], box);
        Lmax = std::max(Lmax, L[l]);
    }
    const double width_min = Lmax > 0.0 ? eps / (2.0 * Lmax) : std::numeric_limits<double>::infinity();

    auto accept_at = [&](const Point& pt, std::vector<Interval>& vals) {
        vals.clear();
        bool ok = true;
        for (const auto& p : prep) {
            vals.push_back(p.eval_point(pt));
            if (!(vals.back().hi <= 0.0)) ok = false;
        }
        return ok;
    };
    auto found = [&](const Point& pt, const std::vector<Interval>& vals) {
        out.kind = SolveOutcome::Kind::Found;
        out.point = pt;
        out.residuals.clear();
        for (const auto& v : vals) out.residuals.push_back(v.hi);
        return out;
    };

    std::vector<Box> stack{box};
    std::vector<Interval> enc(n), vals;
    while (!stack.empty()) {
        Box b = std::move(stack.back());
        stack.pop_back();
        if (++out.boxes > options.budget)
            throw BudgetExceeded("feasibility kernel examined more than " + std::to_string(options.budget) + " boxes");
        if (!X.intersects(b, 0.0)) continue;

        bool pruned = false, all_neg = true;
        for (std::size_t l = 0; l < n; ++l) {
            enc[l] = prep[l].enclose(b);
            if (enc[l].lo > 0.0) {
                pruned = true;
                break;
            }
            if (!(enc[l].hi <= 0.0)) all_neg = false;
        }
        if (pruned) continue;
        if (all_neg) {
            const Point pt = anchor_in(b, X);
            if (accept_at(pt, vals)) return found(pt, vals);
        }

        const double diam = b.diameter();
        const int axis = split_axis(b);
        if (diam <= width_min || axis < 0) {
            const Point pt = anchor_in(b, X);
            if (accept_at(pt, vals)) return found(pt, vals);
            bool discard = false;
            for (std::size_t l = 0; l < n && !discard; ++l) {
                double lb = L[l];
                const auto g = prep[l].gradient(b);
                double s = 0.0;
                for (const auto& gi : g) s += gi.mag() * gi.mag();
                lb = std::min(lb, std::sqrt(s) * (1.0 + 1e-12));
                if (vals[l].lo - lb * diam > -eps) discard = true;
            }
            if (discard) continue;
            if (axis < 0)
                throw PrecisionLimit("feasibility kernel reached floating-point resolution on box " + b.to_string());
        }
        const double mid = 0.5 * (b.lo[axis] + b.hi[axis]);
        Box lo = b, hi = b;
        lo.hi[axis] = mid;
        hi.lo[axis] = mid;
        stack.push_back(std::move(hi));
        stack.push_back(std::move(lo));
    }
    out.kind = SolveOutcome::Kind::Infeasible;
    return out;
}

} // namespace equilib
