#include "equilib/interval.hpp"

#include <sstream>

namespace equilib {

Interval pow(const Interval& a, int p) {
    if (p == 0) return {1.0, 1.0};
    if (p == 1) return a;
    if (p == 2) return sqr(a);
    // Magnitudes raised by repeated outward multiplication.
    auto up = [p](double x) {
        double r = x;
        for (int i = 1; i < p; ++i) r = round_up(r * x);
        return r;
    };
    auto down = [p](double x) {
        double r = x;
        for (int i = 1; i < p; ++i) r = std::max(0.0, round_down(r * x));
        return r;
    };
    if (p % 2 == 0) return {a.mig() == 0.0 ? 0.0 : down(a.mig()), up(a.mag())};
    // odd power is monotone
    auto odd = [&](double x, bool upper) {
        if (x >= 0.0) return upper ? up(x) : down(x);
        return upper ? -down(-x) : -up(-x);
    };
    return {odd(a.lo, false), odd(a.hi, true)};
}

std::string Interval::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << '[' << lo << ", " << hi << ']';
    return os.str();
}

} // namespace equilib
