#include "equilib/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "equilib/error.hpp"

namespace equilib {

double norm_inf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dist_inf(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return std::sqrt(s);
}

Box::Box(Point lo_, Point hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size()) throw InvalidInput("box corners differ in dimension");
}

Point Box::center() const {
    Point c(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) c[j] = 0.5 * (lo[j] + hi[j]);
    return c;
}

double Box::max_width() const {
    double w = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) w = std::max(w, hi[j] - lo[j]);
    return w;
}

double Box::diameter() const {
    double s = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) s += (hi[j] - lo[j]) * (hi[j] - lo[j]);
    return std::sqrt(s);
}

bool Box::contains(std::span<const double> x, double tol) const {
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (x[j] < lo[j] - tol || x[j] > hi[j] + tol) return false;
    return true;
}

bool Box::contains(const Box& o, double tol) const {
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (o.lo[j] < lo[j] - tol || o.hi[j] > hi[j] + tol) return false;
    return true;
}

bool Box::intersects(const Box& o, double tol) const {
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (o.hi[j] < lo[j] - tol || o.lo[j] > hi[j] + tol) return false;
    return true;
}

Box Box::intersection(const Box& o) const {
    Box r = *this;
    for (std::size_t j = 0; j < lo.size(); ++j) {
        r.lo[j] = std::max(lo[j], o.lo[j]);
        r.hi[j] = std::min(hi[j], o.hi[j]);
    }
    return r;
}

bool Box::empty() const {
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (lo[j] > hi[j]) return true;
    return false;
}

Box Box::inflated(double margin) const {
    Box r = *this;
    for (std::size_t j = 0; j < lo.size(); ++j) {
        r.lo[j] -= margin;
        r.hi[j] += margin;
    }
    return r;
}

Point Box::clamp(std::span<const double> x) const {
    Point p(x.begin(), x.end());
    for (std::size_t j = 0; j < lo.size(); ++j) p[j] = std::clamp(p[j], lo[j], hi[j]);
    return p;
}

double Box::distance2_to(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) {
        double g = std::max({lo[j] - x[j], 0.0, x[j] - hi[j]});
        s += g * g;
    }
    return std::sqrt(s);
}

double Box::distance_inf_to(std::span<const double> x) const {
    double m = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) m = std::max({m, lo[j] - x[j], x[j] - hi[j]});
    return m;
}

std::string Box::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (j) os << " x ";
        os << '[' << lo[j] << ", " << hi[j] << ']';
    }
    return os.str();
}

} // namespace equilib
