#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/potential.hpp"

namespace equilib {

// Parameters (B, C, beta_min) of a well-behaved function: away from the
// cover boxes of side beta >= beta_min, every k-th partial is bounded by
//   C^k * 2^B * k! / beta^k.
struct WellBehavedParams {
    int B = 0;
    std::int64_t C = 1;
    double beta_min = 1.0;

    // C^k 2^B k! / beta^k
    double derivative_bound(int k, double beta) const;
    std::string to_string() const;
    bool operator==(const WellBehavedParams&) const = default;
};

// beta -> list of axis-aligned boxes of side <= beta outside of which the
// derivative bound of the owning function holds. Every box produced here is a
// cube of side beta centred on one of the stored centres.
class CoverProvider {
public:
    CoverProvider() = default;
    static CoverProvider centered_cube(Point center);

    std::vector<Box> boxes(double beta) const;
    std::size_t count(double /*beta*/) const { return centers_.size(); }
    const std::vector<Point>& centers() const { return centers_; }
    CoverProvider concat(const CoverProvider& other) const;
    bool operator==(const CoverProvider&) const = default;

private:
    std::vector<Point> centers_;
};

struct WellBehaved {
    WellBehavedParams params;
    CoverProvider cover;
};

// B = ceil(lg(max(1,|q|)/tau)), C = 4, beta_min = 2 tau, one cube at the charge.
WellBehaved single_charge_params(const Charge& charge, double tau);

// kappa-th partial derivatives of a well-behaved family.
WellBehavedParams derivative_params(const WellBehavedParams& p, int kappa);

struct ScaledItem {
    double coef = 1.0;
    WellBehaved item;
};
WellBehaved sum_params(const std::vector<ScaledItem>& items);
WellBehaved product_params(const std::vector<WellBehaved>& items);

// Polynomials on [-1,1]^d whose derivatives are bounded by M there.
WellBehavedParams polynomial_params(double coeff_bound);

} // namespace equilib
