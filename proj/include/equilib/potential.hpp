#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "equilib/geometry.hpp"
#include "equilib/multi_index.hpp"

namespace equilib {

using BigInt = boost::multiprecision::cpp_int;

// A point charge of signed strength q at `position`.
struct Charge {
    double q = 0.0;
    Point position;

    int dim() const { return static_cast<int>(position.size()); }
    bool operator==(const Charge&) const = default;
};

// Validated charge configuration.
//
// The constructor rescales charges and coordinates so that min_i |q_i| = 1 and
// the smallest pairwise sup-norm separation is 1. Evaluation functions take
// and return values in the caller's (original) units; the solver pipeline
// works in normalized units via normalized_charges() and the scale factors.
class ChargeSystem {
public:
    ChargeSystem(int dim, std::vector<Charge> charges);

    int dim() const { return dim_; }
    std::size_t size() const { return charges_.size(); }
    const std::vector<Charge>& charges() const { return charges_; }
    const std::vector<Charge>& normalized_charges() const { return normalized_; }

    // q' = scale_q * q, x' = scale_x * x
    double scale_q() const { return scale_q_; }
    double scale_x() const { return scale_x_; }
    // Normalized max |q_i| and max coordinate-wise separation.
    double q_max() const { return q_max_; }
    double a_max() const { return a_max_; }

    Point to_normalized(std::span<const double> x) const;
    Point from_normalized(std::span<const double> x) const;
    // Multiplier mapping original gradients to normalized ones.
    double gradient_scale() const { return scale_q_ / (scale_x_ * scale_x_); }
    double hessian_scale() const { return scale_q_ / (scale_x_ * scale_x_ * scale_x_); }

    // A system whose original units are this system's normalized units.
    ChargeSystem normalized() const;
    // Same positions, every q negated.
    ChargeSystem negated() const;

private:
    int dim_;
    std::vector<Charge> charges_;
    std::vector<Charge> normalized_;
    double scale_q_ = 1.0;
    double scale_x_ = 1.0;
    double q_max_ = 1.0;
    double a_max_ = 0.0;
};

// x is "at" a charge when the sup-norm distance in normalized units is below this.
inline constexpr double kSingularGuard = 1e-14;

double eval_potential(const ChargeSystem& sys, std::span<const double> x);
Point eval_gradient(const ChargeSystem& sys, std::span<const double> x);
// Row-major d x d matrix of second partials.
std::vector<double> hessian(const ChargeSystem& sys, std::span<const double> x);
double hessian_det(const ChargeSystem& sys, std::span<const double> x);

// Determinant of a row-major n x n matrix by cofactor expansion (n <= 4).
double determinant(std::span<const double> m, int n);

// Raw evaluation over explicit charges, no normalization and no guard.
namespace field {
double potential(std::span<const Charge> charges, std::span<const double> x);
void gradient(std::span<const Charge> charges, std::span<const double> x, std::span<double> out);
void hessian(std::span<const Charge> charges, std::span<const double> x, std::span<double> out);
// Smallest sup-norm distance from x to any charge.
double min_distance_inf(std::span<const Charge> charges, std::span<const double> x);
} // namespace field

// One term  kappa * (x - a)^num / ||x - a||^den  of a derivative expansion.
struct PolyTerm {
    BigInt coefficient; // exact integer; kappa = coefficient * q
    double kappa = 0.0;
    MultiIndex num;
    int den_pow = 1;
};

// Exact symbolic form of D^order (q / ||x - a||).
struct DerivativeExpansion {
    Charge charge;
    MultiIndex order;
    std::vector<PolyTerm> terms;

    double evaluate(std::span<const double> x) const;
};

// Builds the expansion by repeated application of the two-term rule
//   d/dx_j [u^s / r^t] = s_j u^{s - e_j} / r^t - t u^{s + e_j} / r^{t + 2},
// merging terms with identical (s', t'). Throws DegreeOverflow when the
// coefficients cannot be represented in double precision.
DerivativeExpansion derivative_terms(const Charge& charge, const MultiIndex& order);

// Number of terms produced before merging like terms is at most (2d)^|order|.
std::size_t unmerged_term_bound(int dim, int order);

// k! 2^k |q| / r^{k+1}: bound on every k-th partial at Euclidean distance >= r.
double derivative_bound(const Charge& charge, int k, double r);

// Value of D^s of a single charge's potential at x together with an upper
// bound on the floating-point error of that value.
struct PartialValue {
    double value = 0.0;
    double error = 0.0;
};
PartialValue charge_partial(const Charge& charge, const MultiIndex& s, std::span<const double> x);

// All partials D^s of sum_i q_i/||x - a_i|| with |s| <= max_order at x,
// indexed by graded_rank(s).
std::vector<PartialValue> potential_partials(std::span<const Charge> charges,
                                             std::span<const double> x, int max_order);

// Largest order for which derivative_terms/charge_partial are available.
inline constexpr int kMaxExpansionOrder = 140;

} // namespace equilib
