#pragma once

#include <memory>
#include <span>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/polynomial.hpp"
#include "equilib/potential.hpp"

namespace equilib {

// k = max(1, ceil(B + lg(8/eps))); the model polynomial has degree k - 1.
int taylor_degree(double B, double eps);

// Taylor coefficient D^s g(anchor) / s! with an absolute error bound.
struct SeriesCoef {
    double value = 0.0;
    double error = 0.0;
};

// A function whose Taylor coefficients are available exactly up to rounding
// and whose Lagrange remainder can be bounded over a box.
class ModeledFunction {
public:
    virtual ~ModeledFunction() = default;
    virtual int dim() const = 0;
    virtual double value(std::span<const double> x) const = 0;
    // Coefficients for all |s| <= degree, in graded order.
    virtual std::vector<SeriesCoef> series(std::span<const double> anchor, int degree) const = 0;
    // Upper bound on |g(x) - sum_{|s| < k} coef_s (x - anchor)^s| over the box.
    virtual double truncation_bound(const Box& box, std::span<const double> anchor, int k) const = 0;
};

// D^t f for the potential f of the given charges.
class PotentialDerivative : public ModeledFunction {
public:
    PotentialDerivative(std::vector<Charge> charges, MultiIndex t);
    int dim() const override { return t_.dim(); }
    double value(std::span<const double> x) const override;
    std::vector<SeriesCoef> series(std::span<const double> anchor, int degree) const override;
    double truncation_bound(const Box& box, std::span<const double> anchor, int k) const override;
    const MultiIndex& order() const { return t_; }

private:
    std::vector<Charge> charges_;
    MultiIndex t_;
};

// det of the Hessian of f, expanded as sums of products of second partials.
class HessianDeterminant : public ModeledFunction {
public:
    HessianDeterminant(std::vector<Charge> charges, int dim);
    int dim() const override { return dim_; }
    double value(std::span<const double> x) const override;
    std::vector<SeriesCoef> series(std::span<const double> anchor, int degree) const override;
    double truncation_bound(const Box& box, std::span<const double> anchor, int k) const override;

private:
    std::vector<Charge> charges_;
    int dim_;
};

class PolynomialFunction : public ModeledFunction {
public:
    explicit PolynomialFunction(Polynomial p) : p_(std::move(p)) {}
    int dim() const override { return p_.dim(); }
    double value(std::span<const double> x) const override { return p_(x); }
    std::vector<SeriesCoef> series(std::span<const double> anchor, int degree) const override;
    double truncation_bound(const Box& box, std::span<const double> anchor, int k) const override;

private:
    Polynomial p_;
};

// Cauchy product of two truncated series (graded order, same dim and degree).
std::vector<SeriesCoef> series_product(const std::vector<SeriesCoef>& a, const std::vector<SeriesCoef>& b, int dim,
                                       int degree);

struct TaylorModel {
    Box cell;
    Point anchor;
    Polynomial poly; // degree k - 1, centred at the anchor
    int k = 1;
    double truncation = 0.0; // certified Lagrange remainder over the cell
    double rounding = 0.0;   // certified coefficient error over the cell
    double err = 0.0;        // truncation + rounding: sup |g - poly| over the cell
    double budget = 0.0;     // the tolerance the model was built for (eps/4), 0 if none

    double radius_sum() const;
};

// Model with fixed k (polynomial degree k - 1).
TaylorModel expand(const ModeledFunction& g, const Box& cell, std::span<const double> anchor, int k);

// Smallest k whose truncation bound is at most eps/8, with the coefficient
// rounding also checked against eps/8. Throws PrecisionLimit when either
// budget cannot be met for k <= k_limit.
TaylorModel expand_within(const ModeledFunction& g, const Box& cell, std::span<const double> anchor, double eps,
                          int k_limit = kMaxExpansionOrder - 2);

} // namespace equilib
