#include "equilib/wellbehaved.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "equilib/error.hpp"

namespace equilib {

double WellBehavedParams::derivative_bound(int k, double beta) const {
    // evaluated in logs: C^k can be astronomically large for composite families
    const double lg = k * std::log2(static_cast<double>(C)) + B + std::log2(factorial(k)) - k * std::log2(beta);
    return std::exp2(lg);
}

std::string WellBehavedParams::to_string() const {
    std::ostringstream os;
    os << "B=" << B << " C=" << C << " beta_min=" << beta_min;
    return os.str();
}

CoverProvider CoverProvider::centered_cube(Point center) {
    CoverProvider c;
    c.centers_.push_back(std::move(center));
    return c;
}

std::vector<Box> CoverProvider::boxes(double beta) const {
    std::vector<Box> out;
    out.reserve(centers_.size());
    for (const auto& a : centers_) {
        Point lo = a, hi = a;
        for (std::size_t j = 0; j < a.size(); ++j) {
            lo[j] -= beta / 2;
            hi[j] += beta / 2;
        }
        out.emplace_back(std::move(lo), std::move(hi));
    }
    return out;
}

CoverProvider CoverProvider::concat(const CoverProvider& other) const {
    CoverProvider c = *this;
    c.centers_.insert(c.centers_.end(), other.centers_.begin(), other.centers_.end());
    return c;
}

WellBehaved single_charge_params(const Charge& charge, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidTau("tau must be positive");
    WellBehaved w;
    w.params.B = static_cast<int>(std::ceil(std::log2(std::max(1.0, std::abs(charge.q)) / tau)));
    w.params.B = std::max(w.params.B, 0);
    w.params.C = 4;
    w.params.beta_min = 2 * tau;
    w.cover = CoverProvider::centered_cube(charge.position);
    return w;
}

WellBehavedParams derivative_params(const WellBehavedParams& p, int kappa) {
    if (kappa <= 0) return p;
    WellBehavedParams out;
    const double beta = std::min(p.beta_min, 1.0);
    const double k = kappa;
    const double b = p.B + k * std::log2(static_cast<double>(p.C)) + k * std::log2(1.0 / beta) + k * std::log2(k + 1.0);
    out.B = static_cast<int>(std::ceil(b - 1e-12));
    out.C = p.C << kappa;
    out.beta_min = beta;
    return out;
}

WellBehaved sum_params(const std::vector<ScaledItem>& items) {
    if (items.empty()) throw EmptySum("sum of zero functions");
    double best = -1.0;
    std::int64_t c = 0;
    double beta = items.front().item.params.beta_min;
    CoverProvider cover;
    for (const auto& it : items) {
        if (it.coef == 0.0 || !std::isfinite(it.coef)) throw InvalidInput("sum coefficients must be finite and nonzero");
        best = std::max(best, it.item.params.B + std::max(0.0, std::log2(std::abs(it.coef))));
        c += it.item.params.C;
        beta = std::min(beta, it.item.params.beta_min);
        cover = cover.concat(it.item.cover);
    }
    WellBehaved w;
    w.params.B = static_cast<int>(std::ceil(std::log2(static_cast<double>(items.size())) + best - 1e-12));
    w.params.C = c;
    w.params.beta_min = beta;
    w.cover = std::move(cover);
    return w;
}

WellBehaved product_params(const std::vector<WellBehaved>& items) {
    if (items.empty()) throw EmptyProduct("product of zero functions");
    WellBehaved w;
    std::int64_t cmax = 0;
    w.params.B = 0;
    w.params.beta_min = items.front().params.beta_min;
    for (const auto& it : items) {
        w.params.B += it.params.B;
        cmax = std::max(cmax, it.params.C);
        w.params.beta_min = std::min(w.params.beta_min, it.params.beta_min);
        w.cover = w.cover.concat(it.cover);
    }
    w.params.C = static_cast<std::int64_t>(items.size()) * cmax;
    return w;
}

WellBehavedParams polynomial_params(double coeff_bound) {
    if (!(coeff_bound > 0.0)) throw InvalidInput("polynomial coefficient bound must be positive");
    WellBehavedParams p;
    p.B = std::max(0, static_cast<int>(std::ceil(std::log2(coeff_bound))));
    p.C = 2;
    p.beta_min = 2.0;
    return p;
}

} // namespace equilib
