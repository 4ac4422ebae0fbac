#include "equilib/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include <Eigen/Dense>

#include "equilib/error.hpp"

namespace equilib {

std::string ScanReport::to_text() const {
    std::vector<const ScanPoint*> sorted;
    for (const auto& p : points) sorted.push_back(&p);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->x < b->x; });
    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "h %.9e\nthreshold %.9e\n", h, threshold);
    out += buf;
    std::snprintf(buf, sizeof buf, "min %.9e\npoints %zu\n", min_residual, points.size());
    out += buf;
    for (const auto* p : sorted) {
        for (double v : p->x) {
            std::snprintf(buf, sizeof buf, "%.9f ", v);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, "%.9e\n", p->residual);
        out += buf;
    }
    return out;
}

ScanReport brute_force_scan(const ChargeSystem& sys, const Polytope& X, double threshold, double h,
                            unsigned threads) {
    if (!(h > 0.0)) throw InvalidInput("scan spacing must be positive");
    if (X.dim() != sys.dim()) throw InvalidInput("domain and charges differ in dimension");
    const int d = sys.dim();
    const Box bb = X.bounding_box();
    std::vector<std::size_t> count(d);
    double total = 1.0;
    for (int j = 0; j < d; ++j) {
        count[j] = static_cast<std::size_t>(std::floor(bb.width(j) / h * (1.0 + 1e-12))) + 1;
        total *= static_cast<double>(count[j]);
    }
    if (total > kScanCap) throw TooFine("scan grid has " + std::to_string(total) + " points, cap is 1e8");

    ScanReport rep;
    rep.h = h;
    rep.threshold = threshold;
    rep.min_residual = INFINITY;
    const double tol = 1e-12 * std::max(1.0, bb.max_width());
    const auto& charges = sys.charges();

    struct Chunk {
        std::vector<ScanPoint> points;
        double min = INFINITY;
        Point argmin;
        std::size_t scanned = 0;
    };
    auto scan_rows = [&](std::size_t first, std::size_t last, Chunk& c) {
        std::vector<std::size_t> idx(d, 0);
        idx[0] = first;
        Point x(d), g(d);
        while (idx[0] < last) {
            for (int j = 0; j < d; ++j) x[j] = std::min(bb.lo[j] + static_cast<double>(idx[j]) * h, bb.hi[j]);
            if (X.contains(x, tol) && field::min_distance_inf(charges, x) * sys.scale_x() >= kSingularGuard) {
                field::gradient(charges, x, g);
                const double r = norm_inf(g);
                ++c.scanned;
                if (r < c.min) {
                    c.min = r;
                    c.argmin = x;
                }
                if (r <= threshold) c.points.push_back({x, r});
            }
            int j = d - 1;
            while (j > 0 && ++idx[j] == count[j]) idx[j--] = 0;
            if (j == 0) ++idx[0];
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count[0])));
    std::vector<Chunk> chunks(threads);
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t a = count[0] * t / threads, b = count[0] * (t + 1) / threads;
            auto job = [&, a, b, t] {
                try {
                    scan_rows(a, b, chunks[t]);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            };
            if (threads == 1) job();
            else pool.emplace_back(job);
        }
    }
    for (unsigned t = 0; t < threads; ++t) {
        if (errors[t]) std::rethrow_exception(errors[t]);
        auto& c = chunks[t];
        rep.points.insert(rep.points.end(), c.points.begin(), c.points.end());
        rep.scanned += c.scanned;
        if (c.min < rep.min_residual) {
            rep.min_residual = c.min;
            rep.argmin = c.argmin;
        }
    }
    return rep;
}

BisectResult two_charge_bisect(double q1, double q2, double separation, double tol) {
    if (!(q1 > 0.0) || !(q2 > 0.0)) throw InvalidInput("bisection needs positive charges");
    if (!(separation > 0.0)) throw InvalidInput("separation must be positive");
    if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
    // axial derivative of q1/x + q2/(s - x): negative near 0, positive near s
    auto force = [&](double x) { return -q1 / (x * x) + q2 / ((separation - x) * (separation - x)); };
    BisectResult r;
    double lo = 0.0, hi = separation;
    while (hi - lo > tol) {
        const double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) break;
        if (force(mid) < 0.0) lo = mid;
        else hi = mid;
        ++r.iterations;
    }
    r.x = lo + (hi - lo) / 2;
    r.width = hi - lo;
    return r;
}

double finite_difference(const ChargeSystem& sys, std::span<const double> x, const MultiIndex& s, double h) {
    const int d = sys.dim();
    if (s.dim() != d || static_cast<int>(x.size()) != d) throw InvalidInput("dimension mismatch");
    const int k = s.order();
    if (k > 4) throw InvalidInput("finite differences are limited to order 4");
    if (!(h > 0.0)) {
        double r = INFINITY;
        for (const auto& c : sys.charges()) r = std::min(r, dist2(x, c.position));
        h = k == 0 ? 0.0 : r * std::pow(std::numeric_limits<long double>::epsilon(), 1.0 / (k + 2));
    }
    // potential in extended precision
    auto f = [&](const std::vector<long double>& p) {
        long double v = 0.0L;
        for (const auto& c : sys.charges()) {
            long double r2 = 0.0L;
            for (int j = 0; j < d; ++j) {
                const long double u = p[j] - static_cast<long double>(c.position[j]);
                r2 += u * u;
            }
            v += static_cast<long double>(c.q) / std::sqrt(r2);
        }
        return v;
    };
    // tensor product of the 1-D central stencils  sum_i (-1)^i C(n,i) f(x + (n/2 - i) h)
    std::vector<int> i(d, 0);
    long double total = 0.0L;
    std::vector<long double> p(d);
    while (true) {
        long double w = 1.0L;
        for (int j = 0; j < d; ++j) {
            const int n = s[j];
            p[j] = static_cast<long double>(x[j]) + (0.5L * n - i[j]) * static_cast<long double>(h);
            w *= ((i[j] & 1) ? -1.0L : 1.0L) * static_cast<long double>(binomial(n, i[j]));
        }
        total += w * f(p);
        int j = d - 1;
        while (j >= 0 && ++i[j] > s[j]) i[j--] = 0;
        if (j < 0) break;
    }
    return static_cast<double>(total / std::pow(static_cast<long double>(h), k));
}

NewtonResult newton_refine(const ChargeSystem& sys, std::span<const double> x0, int max_iters) {
    const int d = sys.dim();
    if (static_cast<int>(x0.size()) != d) throw InvalidInput("dimension mismatch");
    NewtonResult r;
    r.x.assign(x0.begin(), x0.end());
    Point g = eval_gradient(sys, r.x);
    r.residual = norm_inf(g);
    while (r.residual > kNewtonTolerance && r.iterations < max_iters) {
        const auto hv = hessian(sys, r.x);
        Eigen::MatrixXd H(d, d);
        Eigen::VectorXd gv(d);
        for (int a = 0; a < d; ++a) {
            gv(a) = g[a];
            for (int b = 0; b < d; ++b) H(a, b) = hv[a * d + b];
        }
        const double scale = std::pow(H.cwiseAbs().maxCoeff(), d);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
        if (!(std::abs(H.determinant()) > 1e-300 * std::max(1.0, scale)) || lu.rank() < d ||
            lu.rcond() < 1e-14)
            throw SingularHessian("Hessian is singular at the Newton iterate");
        const Eigen::VectorXd step = lu.solve(gv);
        // halve the step until the residual decreases
        double t = 1.0;
        bool moved = false;
        for (int halvings = 0; halvings < 40; ++halvings, t /= 2) {
            Point y(d);
            for (int a = 0; a < d; ++a) y[a] = r.x[a] - t * step(a);
            if (field::min_distance_inf(sys.charges(), y) * sys.scale_x() < kSingularGuard) continue;
            const Point gy = eval_gradient(sys, y);
            const double ry = norm_inf(gy);
            if (ry < r.residual) {
                r.x = y;
                g = gy;
                r.residual = ry;
                moved = true;
                break;
            }
        }
        ++r.iterations;
        if (!moved) break; // stalled at rounding level
    }
    r.converged = r.residual <= kNewtonTolerance;
    return r;
}

} // namespace equilib
