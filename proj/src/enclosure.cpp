#include "equilib/enclosure.hpp"

namespace equilib {

namespace {

struct ChargeTerms {
    Interval u[kMaxDim];
    Interval inv3; // q / r^3
    Interval inv5; // 3 q / r^5
};

ChargeTerms charge_terms(const Charge& c, const Box& box) {
    ChargeTerms t;
    const int d = c.dim();
    Interval r2(0.0);
    for (int j = 0; j < d; ++j) {
        t.u[j] = Interval{round_down(box.lo[j] - c.position[j]), round_up(box.hi[j] - c.position[j])};
        r2 += sqr(t.u[j]);
    }
    const Interval r = sqrt(r2);
    const Interval r3 = r2 * r;
    t.inv3 = Interval(c.q) / r3;
    t.inv5 = Interval(3.0) * t.inv3 / r2;
    return t;
}

} // namespace

std::vector<Interval> hessian_enclosure(std::span<const Charge> charges, const Box& box) {
    const int d = box.dim();
    std::vector<Interval> h(static_cast<std::size_t>(d * d), Interval(0.0));
    for (const auto& c : charges) {
        const ChargeTerms t = charge_terms(c, box);
        for (int j = 0; j < d; ++j)
            for (int k = j; k < d; ++k) {
                const Interval uu = j == k ? sqr(t.u[j]) : t.u[j] * t.u[k];
                Interval v = t.inv5 * uu;
                if (j == k) v -= t.inv3;
                h[j * d + k] += v;
            }
    }
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < j; ++k) h[j * d + k] = h[k * d + j];
    return h;
}

std::vector<Interval> gradient_enclosure(std::span<const Charge> charges, const Box& box) {
    const int d = box.dim();
    std::vector<Interval> nat(d, Interval(0.0));
    for (const auto& c : charges) {
        const ChargeTerms t = charge_terms(c, box);
        for (int j = 0; j < d; ++j) nat[j] -= t.inv3 * t.u[j];
    }
    // mean value form about the centre
    const Point m = box.center();
    const Box point(m, m);
    std::vector<Interval> mv(d, Interval(0.0));
    for (const auto& c : charges) {
        const ChargeTerms t = charge_terms(c, point);
        for (int j = 0; j < d; ++j) mv[j] -= t.inv3 * t.u[j];
    }
    const auto h = hessian_enclosure(charges, box);
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            const Interval dx{round_down(box.lo[k] - m[k]), round_up(box.hi[k] - m[k])};
            mv[j] += h[j * d + k] * dx;
        }
        nat[j] = intersect(nat[j], mv[j]);
    }
    return nat;
}

Interval interval_determinant(std::span<const Interval> m, int d) {
    if (d == 1) return m[0];
    if (d == 2) return m[0] * m[3] - sqr(m[1]);
    Interval det(0.0);
    std::vector<Interval> minor(static_cast<std::size_t>((d - 1) * (d - 1)));
    for (int col = 0; col < d; ++col) {
        int idx = 0;
        for (int r = 1; r < d; ++r)
            for (int c = 0; c < d; ++c)
                if (c != col) minor[idx++] = m[r * d + c];
        // minors of a symmetric matrix are not symmetric in general
        Interval sub;
        if (d - 1 == 2) sub = minor[0] * minor[3] - minor[1] * minor[2];
        else sub = interval_determinant(minor, d - 1);
        const Interval term = m[col] * sub;
        det = col % 2 == 0 ? det + term : det - term;
    }
    return det;
}

Interval hessian_det_enclosure(std::span<const Charge> charges, const Box& box) {
    const auto h = hessian_enclosure(charges, box);
    return interval_determinant(h, box.dim());
}

} // namespace equilib
