#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace equilib {

// Closed interval [lo, hi] with outward rounding: every operation computes the
// result in round-to-nearest and then widens each end by one ulp, so the true
// result of the real operation is always enclosed.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr Interval(double v) : lo(v), hi(v) {} // NOLINT: implicit point interval
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    static Interval entire() {
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }
    // v +- err, widened outward.
    static Interval around(double v, double err);

    double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
    double width() const { return hi - lo; }
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    // smallest |x| over the interval
    double mig() const { return (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi)); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
    bool empty() const { return !(lo <= hi); }
    std::string to_string() const;
};

inline double round_down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double round_up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

inline Interval Interval::around(double v, double err) {
    return {round_down(v - err), round_up(v + err)};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator+(const Interval& a, const Interval& b) {
    return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)};
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)};
}

inline Interval operator*(const Interval& a, const Interval& b) {
    if (a.lo == a.hi && b.lo == b.hi) {
        const double p = a.lo * b.lo;
        if (p == 0.0 && (a.lo == 0.0 || b.lo == 0.0)) return {0.0, 0.0};
        return {round_down(p), round_up(p)};
    }
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    double l = std::min({p1, p2, p3, p4});
    double h = std::max({p1, p2, p3, p4});
    // 0 * inf guards
    if (std::isnan(l) || std::isnan(h)) return Interval::entire();
    return {round_down(l), round_up(h)};
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) return Interval::entire();
    const double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return {round_down(std::min({p1, p2, p3, p4})), round_up(std::max({p1, p2, p3, p4}))};
}

inline Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
inline Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
inline Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }

// Tight square: never negative.
inline Interval sqr(const Interval& a) {
    const double l = a.mig(), h = a.mag();
    return {l == 0.0 ? 0.0 : std::max(0.0, round_down(l * l)), round_up(h * h)};
}

// a^p with p >= 0; even powers are nonnegative and tight around zero.
Interval pow(const Interval& a, int p);

inline Interval sqrt(const Interval& a) {
    const double l = a.lo <= 0.0 ? 0.0 : std::max(0.0, round_down(std::sqrt(a.lo)));
    return {l, round_up(std::sqrt(std::max(0.0, a.hi)))};
}

inline Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

// Intersection; if the two enclosures are (numerically) disjoint the first is kept.
inline Interval intersect(const Interval& a, const Interval& b) {
    Interval r{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    return r.empty() ? a : r;
}

inline Interval abs(const Interval& a) { return {a.mig(), a.mag()}; }

} // namespace equilib
