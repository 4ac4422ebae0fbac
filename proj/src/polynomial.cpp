#include "equilib/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "equilib/error.hpp"

namespace equilib {

Polynomial::Polynomial(int dim, int degree, Point center)
    : dim_(dim), degree_(degree), center_(std::move(center)) {
    if (dim < 1 || dim > kMaxDim) throw InvalidInput("polynomial dimension out of range");
    if (degree < 0) throw InvalidInput("polynomial degree must be nonnegative");
    if (static_cast<int>(center_.size()) != dim) throw InvalidInput("polynomial centre has wrong dimension");
    indices_ = &graded_indices(dim, degree);
    coef_.assign(indices_->size(), 0.0);
}

Polynomial Polynomial::constant(int dim, double c) {
    Polynomial p(dim, 0);
    p.coef_[0] = c;
    return p;
}

Polynomial Polynomial::from_terms(int dim, const std::vector<std::pair<MultiIndex, double>>& terms, Point center) {
    int deg = 0;
    for (const auto& [s, c] : terms) deg = std::max(deg, s.order());
    if (center.empty()) center.assign(dim, 0.0);
    Polynomial p(dim, deg, std::move(center));
    for (const auto& [s, c] : terms) p.coef_[graded_rank(s)] += c;
    return p;
}

int Polynomial::effective_degree() const {
    for (std::size_t i = coef_.size(); i-- > 0;)
        if (coef_[i] != 0.0) return (*indices_)[i].order();
    return 0;
}

double Polynomial::coefficient(const MultiIndex& s) const {
    if (s.order() > degree_) return 0.0;
    return coef_[graded_rank(s)];
}

void Polynomial::set(const MultiIndex& s, double c) {
    if (s.order() > degree_) throw InvalidInput("monomial exceeds polynomial degree");
    coef_[graded_rank(s)] = c;
}

double Polynomial::operator()(std::span<const double> x) const {
    double pw[kMaxDim][64];
    std::vector<double> big;
    double sum = 0.0;
    if (degree_ < 64) {
        for (int j = 0; j < dim_; ++j) {
            pw[j][0] = 1.0;
            for (int e = 1; e <= degree_; ++e) pw[j][e] = pw[j][e - 1] * (x[j] - center_[j]);
        }
        for (std::size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i] == 0.0) continue;
            double t = coef_[i];
            const auto& s = (*indices_)[i];
            for (int j = 0; j < dim_; ++j) t *= pw[j][s[j]];
            sum += t;
        }
        return sum;
    }
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        double t = coef_[i];
        const auto& s = (*indices_)[i];
        for (int j = 0; j < dim_; ++j) t *= std::pow(x[j] - center_[j], s[j]);
        sum += t;
    }
    return sum;
}

namespace {

// base^0 .. base^n with exact sign handling.
void interval_powers(const Interval& base, int n, std::vector<Interval>& out) {
    out.resize(static_cast<std::size_t>(n) + 1);
    out[0] = Interval(1.0);
    if (n == 0) return;
    out[1] = base;
    double a, b; // magnitudes: a <= b
    enum { Pos, Neg, Mixed } kind;
    if (base.lo >= 0.0) {
        kind = Pos;
        a = base.lo;
        b = base.hi;
    } else if (base.hi <= 0.0) {
        kind = Neg;
        a = -base.hi;
        b = -base.lo;
    } else {
        kind = Mixed;
        a = -base.lo;
        b = base.hi;
    }
    double a_dn = a, a_up = a, b_dn = b, b_up = b;
    for (int e = 2; e <= n; ++e) {
        a_dn = std::max(0.0, round_down(a_dn * a));
        a_up = round_up(a_up * a);
        b_dn = std::max(0.0, round_down(b_dn * b));
        b_up = round_up(b_up * b);
        const bool even = e % 2 == 0;
        switch (kind) {
        case Pos: out[e] = {a_dn, b_up}; break;
        case Neg: out[e] = even ? Interval{a_dn, b_up} : Interval{-b_up, -a_dn}; break;
        case Mixed: out[e] = even ? Interval{0.0, std::max(a_up, b_up)} : Interval{-a_up, b_up}; break;
        }
    }
}

} // namespace

Interval Polynomial::eval_natural(const Box& box) const {
    thread_local std::vector<Interval> pw[kMaxDim];
    for (int j = 0; j < dim_; ++j) {
        const Interval base{round_down(box.lo[j] - center_[j]), round_up(box.hi[j] - center_[j])};
        interval_powers(base, degree_, pw[j]);
    }
    Interval sum(0.0);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        if (coef_[i] == 0.0) continue;
        Interval t(coef_[i]);
        const auto& s = (*indices_)[i];
        for (int j = 0; j < dim_; ++j)
            if (s[j]) t = t * pw[j][s[j]];
        sum += t;
    }
    return sum;
}

Interval Polynomial::eval_point(std::span<const double> x) const {
    Point p(x.begin(), x.end());
    return eval_natural(Box(p, p));
}

Polynomial Polynomial::derivative(int axis) const {
    Polynomial d(dim_, std::max(0, degree_ - 1), center_);
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        const auto& s = (*indices_)[i];
        if (s[axis] == 0 || coef_[i] == 0.0) continue;
        d.coef_[graded_rank(s.minus(axis))] = coef_[i] * s[axis];
    }
    return d;
}

Polynomial Polynomial::operator-() const { return scaled(-1.0); }

Polynomial Polynomial::scaled(double s) const {
    Polynomial p = *this;
    for (double& c : p.coef_) c *= s;
    return p;
}

Polynomial Polynomial::plus_constant(double c) const {
    Polynomial p = *this;
    p.coef_[0] += c;
    return p;
}

std::string Polynomial::to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        if (coef_[i] == 0.0) continue;
        os << (first ? "" : " + ") << coef_[i];
        const auto& s = (*indices_)[i];
        for (int j = 0; j < dim_; ++j)
            if (s[j]) os << "*(x" << j + 1 << "-" << center_[j] << ")^" << s[j];
        first = false;
    }
    return first ? "0" : os.str();
}

PreparedPolynomial::PreparedPolynomial(Polynomial p) : p_(std::move(p)) {
    for (int j = 0; j < p_.dim(); ++j) grad_.push_back(p_.derivative(j));
}

std::vector<Interval> PreparedPolynomial::gradient(const Box& box) const {
    std::vector<Interval> g;
    g.reserve(grad_.size());
    for (const auto& q : grad_) g.push_back(q.eval_natural(box));
    return g;
}

Interval PreparedPolynomial::enclose(const Box& box) const {
    Interval nat = p_.eval_natural(box);
    if (p_.degree() <= 1) return nat;
    const Point m = box.center();
    Interval mv = p_.eval_point(m);
    for (int j = 0; j < p_.dim(); ++j) {
        const Interval dx{round_down(box.lo[j] - m[j]), round_up(box.hi[j] - m[j])};
        mv += grad_[j].eval_natural(box) * dx;
    }
    return intersect(nat, mv);
}

Interval eval_poly_interval(const Polynomial& poly, const Box& box) { return PreparedPolynomial(poly).enclose(box); }

double lipschitz_bound(const Polynomial& poly, const Box& box) {
    const int d = poly.dim();
    Point r(d);
    for (int j = 0; j < d; ++j)
        r[j] = std::max(std::abs(box.lo[j] - poly.center()[j]), std::abs(box.hi[j] - poly.center()[j]));
    double total = 0.0;
    for (int j = 0; j < d; ++j) {
        const Polynomial g = poly.derivative(j);
        double sum = 0.0;
        const auto& idx = g.indices();
        for (std::size_t i = 0; i < idx.size(); ++i) {
            double t = std::abs(g.coefficients()[i]);
            if (t == 0.0) continue;
            for (int a = 0; a < d; ++a) t *= std::pow(r[a], idx[i][a]);
            sum += t;
        }
        total += sum * sum;
    }
    // generous outward slack for the rounding in the sums above
    return std::sqrt(total) * (1.0 + 1e-12);
}

} // namespace equilib
