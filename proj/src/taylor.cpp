#include <cstdio>
#include "equilib/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "equilib/error.hpp"

namespace equilib {

namespace {

constexpr double kU = std::numeric_limits<double>::epsilon() / 2;
constexpr long double kULd = std::numeric_limits<long double>::epsilon() / 2;

// Dense lookup (s_1, ..., s_d) -> graded rank for |s| <= degree.
class RankTable {
public:
    RankTable(int dim, int degree) : dim_(dim), stride_(degree + 1) {
        std::size_t size = 1;
        for (int j = 0; j < dim; ++j) size *= static_cast<std::size_t>(stride_);
        table_.assign(size, -1);
        const auto& idx = graded_indices(dim, degree);
        for (std::size_t i = 0; i < idx.size(); ++i) table_[key(idx[i])] = static_cast<int>(i);
    }
    int operator()(const MultiIndex& s) const { return table_[key(s)]; }

private:
    std::size_t key(const MultiIndex& s) const {
        std::size_t k = 0;
        for (int j = 0; j < dim_; ++j) k = k * static_cast<std::size_t>(stride_) + static_cast<std::size_t>(s[j]);
        return k;
    }
    int dim_;
    int stride_;
    std::vector<int> table_;
};

// Calls f(t) for every t <= s componentwise.
template <class F>
void for_each_sub(const MultiIndex& s, F&& f) {
    MultiIndex t(s.dim());
    while (true) {
        f(t);
        int j = s.dim() - 1;
        while (j >= 0 && t[j] == s[j]) t.set(j--, 0);
        if (j < 0) return;
        t.set(j, t[j] + 1);
    }
}

Point radii(const Box& box, std::span<const double> anchor) {
    Point r(box.dim());
    for (int j = 0; j < box.dim(); ++j)
        r[j] = std::max(std::abs(box.lo[j] - anchor[j]), std::abs(box.hi[j] - anchor[j]));
    return r;
}

double monomial_bound(const MultiIndex& s, std::span<const double> r) {
    double t = 1.0;
    for (int j = 0; j < s.dim(); ++j) t *= std::pow(r[j], s[j]);
    return t;
}

// Euclidean distance from a box to a point, rounded down.
double safe_distance(const Box& box, std::span<const double> a) {
    return box.distance2_to(a) * (1.0 - 1e-14);
}

} // namespace

int taylor_degree(double B, double eps) {
    if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
    const double k = std::ceil(B + std::log2(8.0 / eps) - 1e-12);
    return std::max(1, static_cast<int>(k));
}

// ---------------------------------------------------------------- PotentialDerivative

PotentialDerivative::PotentialDerivative(std::vector<Charge> charges, MultiIndex t)
    : charges_(std::move(charges)), t_(t) {
    if (charges_.empty()) throw InvalidInput("no charges");
}

double PotentialDerivative::value(std::span<const double> x) const {
    double v = 0.0;
    for (const auto& c : charges_) v += charge_partial(c, t_, x).value;
    return v;
}

std::vector<SeriesCoef> PotentialDerivative::series(std::span<const double> anchor, int degree) const {
    const int d = dim();
    const int m = t_.order();
    const auto parts = potential_partials(charges_, anchor, degree + m);
    const RankTable rank(d, degree + m);
    const auto& idx = graded_indices(d, degree);
    std::vector<SeriesCoef> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& p = parts[rank(idx[i] + t_)];
        const double f = idx[i].factorial();
        out[i].value = p.value / f;
        out[i].error = p.error / f + kU * std::abs(out[i].value);
    }
    return out;
}

double PotentialDerivative::truncation_bound(const Box& box, std::span<const double> anchor, int k) const {
    const Point r = radii(box, anchor);
    const double R = std::accumulate(r.begin(), r.end(), 0.0);
    const int m = t_.order();
    double total = 0.0;
    for (const auto& c : charges_) {
        const double rho = safe_distance(box, c.position);
        if (!(rho > 0.0)) return std::numeric_limits<double>::infinity();
        // (k+m)!/k! 2^{k+m} |q| R^k / rho^{k+m+1}
        double t = std::abs(c.q) / rho;
        for (int i = 1; i <= m; ++i) t *= 2.0 * (k + i) / rho;
        t *= std::pow(2.0 * R / rho, k);
        total += t;
    }
    return total * (1.0 + 1e-12);
}

// ---------------------------------------------------------------- HessianDeterminant

HessianDeterminant::HessianDeterminant(std::vector<Charge> charges, int dim) : charges_(std::move(charges)), dim_(dim) {
    if (charges_.empty()) throw InvalidInput("no charges");
}

double HessianDeterminant::value(std::span<const double> x) const {
    std::vector<double> h(static_cast<std::size_t>(dim_ * dim_));
    field::hessian(charges_, x, h);
    return determinant(h, dim_);
}

std::vector<SeriesCoef> series_product(const std::vector<SeriesCoef>& a, const std::vector<SeriesCoef>& b, int dim,
                                       int degree) {
    const auto& idx = graded_indices(dim, degree);
    const RankTable rank(dim, degree);
    std::vector<SeriesCoef> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const MultiIndex& s = idx[i];
        long double val = 0.0L, mag = 0.0L, err = 0.0L;
        int terms = 0;
        for_each_sub(s, [&](const MultiIndex& t) {
            MultiIndex rest(dim);
            for (int j = 0; j < dim; ++j) rest.set(j, s[j] - t[j]);
            const auto& x = a[rank(t)];
            const auto& y = b[rank(rest)];
            const long double p = static_cast<long double>(x.value) * y.value;
            val += p;
            mag += std::abs(p);
            err += std::abs(x.value) * static_cast<long double>(y.error) +
                   static_cast<long double>(x.error) * std::abs(y.value) + static_cast<long double>(x.error) * y.error;
            ++terms;
        });
        out[i].value = static_cast<double>(val);
        out[i].error = static_cast<double>(err + (terms + 2) * kULd * mag) + kU * std::abs(out[i].value);
    }
    return out;
}

std::vector<SeriesCoef> HessianDeterminant::series(std::span<const double> anchor, int degree) const {
    const int d = dim_;
    const auto parts = potential_partials(charges_, anchor, degree + 2);
    const RankTable rank(d, degree + 2);
    const auto& idx = graded_indices(d, degree);
    // entry series h_ab
    std::vector<std::vector<SeriesCoef>> h(static_cast<std::size_t>(d * d));
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            auto& e = h[a * d + b];
            e.resize(idx.size());
            const MultiIndex ab = MultiIndex::unit(d, a).plus(b);
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const auto& p = parts[rank(idx[i] + ab)];
                const double f = idx[i].factorial();
                e[i].value = p.value / f;
                e[i].error = p.error / f + kU * std::abs(e[i].value);
            }
            h[b * d + a] = e;
        }
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<SeriesCoef> total(idx.size());
    std::vector<double> mag(idx.size(), 0.0);
    do {
        int inversions = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (perm[i] > perm[j]) ++inversions;
        std::vector<SeriesCoef> prod = h[0 * d + perm[0]];
        for (int r = 1; r < d; ++r) prod = series_product(prod, h[r * d + perm[r]], d, degree);
        const double sign = inversions % 2 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            total[i].value += sign * prod[i].value;
            total[i].error += prod[i].error;
            mag[i] += std::abs(prod[i].value);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double gamma = (std::tgamma(d + 1.0) + 1.0) * kU;
    for (std::size_t i = 0; i < idx.size(); ++i) total[i].error += gamma * mag[i] * 1.01;
    return total;
}

double HessianDeterminant::truncation_bound(const Box& box, std::span<const double> anchor, int k) const {
    const Point r = radii(box, anchor);
    const double R = std::accumulate(r.begin(), r.end(), 0.0);
    // nu[m] bounds sum_{|s|=m} |D^s h_ab(xi)| |u^s| / s! for every entry
    std::vector<double> nu(static_cast<std::size_t>(k) + 1, 0.0);
    for (const auto& c : charges_) {
        const double rho = safe_distance(box, c.position);
        if (!(rho > 0.0)) return std::numeric_limits<double>::infinity();
        const double base = 4.0 * std::abs(c.q) / (rho * rho * rho);
        const double ratio = 2.0 * R / rho;
        double pw = 1.0;
        for (int m = 0; m <= k; ++m) {
            nu[m] += (m + 1.0) * (m + 2.0) * base * pw;
            pw *= ratio;
        }
    }
    std::vector<double> conv = nu;
    for (int r2 = 1; r2 < dim_; ++r2) {
        std::vector<double> next(nu.size(), 0.0);
        for (int m = 0; m <= k; ++m)
            for (int i = 0; i <= m; ++i) next[m] += conv[i] * nu[m - i];
        conv = std::move(next);
    }
    return std::tgamma(dim_ + 1.0) * conv[k] * (1.0 + 1e-12);
}

// ---------------------------------------------------------------- PolynomialFunction

namespace {

// Coefficients of p re-expanded about `anchor`, with error bounds.
std::vector<SeriesCoef> shifted(const Polynomial& p, std::span<const double> anchor) {
    const int d = p.dim();
    const int deg = p.degree();
    const auto& idx = p.indices();
    Point h(d);
    for (int j = 0; j < d; ++j) h[j] = anchor[j] - p.center()[j];
    const RankTable rank(d, deg);
    std::vector<SeriesCoef> out(idx.size());
    std::vector<long double> val(idx.size(), 0.0L), mag(idx.size(), 0.0L);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double c = p.coefficients()[i];
        if (c == 0.0) continue;
        const MultiIndex& t = idx[i];
        // c (h + u)^t = c sum_{s <= t} binom(t, s) h^{t-s} u^s
        for_each_sub(t, [&](const MultiIndex& s) {
            long double term = c;
            for (int j = 0; j < d; ++j)
                term *= binomial(t[j], s[j]) * std::pow(static_cast<long double>(h[j]), t[j] - s[j]);
            const int r = rank(s);
            val[r] += term;
            mag[r] += std::abs(term);
        });
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out[i].value = static_cast<double>(val[i]);
        out[i].error = static_cast<double>((4 * deg + 8) * kULd * mag[i]) + kU * std::abs(out[i].value);
    }
    return out;
}

} // namespace

std::vector<SeriesCoef> PolynomialFunction::series(std::span<const double> anchor, int degree) const {
    const auto full = shifted(p_, anchor);
    const auto& idx = graded_indices(p_.dim(), degree);
    std::vector<SeriesCoef> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (idx[i].order() <= p_.degree()) out[i] = full[graded_rank(idx[i])];
    return out;
}

double PolynomialFunction::truncation_bound(const Box& box, std::span<const double> anchor, int k) const {
    if (k > p_.degree()) return 0.0;
    const auto full = shifted(p_, anchor);
    const Point r = radii(box, anchor);
    const auto& idx = p_.indices();
    double total = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        if (idx[i].order() >= k) total += (std::abs(full[i].value) + full[i].error) * monomial_bound(idx[i], r);
    return total * (1.0 + 1e-12);
}

// ---------------------------------------------------------------- models

double TaylorModel::radius_sum() const {
    const Point r = radii(cell, anchor);
    return std::accumulate(r.begin(), r.end(), 0.0);
}

TaylorModel expand(const ModeledFunction& g, const Box& cell, std::span<const double> anchor, int k) {
    if (k < 1) throw InvalidInput("Taylor order k must be at least 1");
    if (k - 1 > kMaxExpansionOrder) throw DegreeOverflow("Taylor degree exceeds the supported maximum");
    TaylorModel m;
    m.cell = cell;
    m.anchor.assign(anchor.begin(), anchor.end());
    m.k = k;
    m.poly = Polynomial(g.dim(), k - 1, m.anchor);
    const auto coefs = g.series(anchor, k - 1);
    const Point r = radii(cell, anchor);
    const auto& idx = m.poly.indices();
    double rounding = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        m.poly.coefficients()[i] = coefs[i].value;
        rounding += coefs[i].error * monomial_bound(idx[i], r);
    }
    m.rounding = rounding * (1.0 + 1e-12);
    m.truncation = g.truncation_bound(cell, anchor, k);
    m.err = (m.rounding + m.truncation) * (1.0 + 1e-15);
    return m;
}

namespace {
std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}
} // namespace

TaylorModel expand_within(const ModeledFunction& g, const Box& cell, std::span<const double> anchor, double eps,
                          int k_limit) {
    if (!(eps > 0.0)) throw InvalidInput("eps must be positive");
    int k = 1;
    while (k <= k_limit && !(g.truncation_bound(cell, anchor, k) <= eps / 8)) ++k;
    if (k > k_limit)
        throw PrecisionLimit("no Taylor order up to " + std::to_string(k_limit) + " certifies the cell " +
                             cell.to_string());
    TaylorModel m = expand(g, cell, anchor, k);
    m.budget = eps / 4;
    if (!(m.rounding <= eps / 8))
        throw PrecisionLimit("coefficient rounding " + sci(m.rounding) + " exceeds eps/8 = " + sci(eps / 8) + " on cell " +
                             cell.to_string());
    return m;
}

} // namespace equilib
