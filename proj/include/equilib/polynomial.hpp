#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/interval.hpp"
#include "equilib/multi_index.hpp"

namespace equilib {

// Dense polynomial  sum_s c_s (x - center)^s  over |s| <= degree, stored in
// graded order (see graded_rank).
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(int dim, int degree, Point center);
    Polynomial(int dim, int degree) : Polynomial(dim, degree, Point(dim, 0.0)) {}
    static Polynomial constant(int dim, double c);
    static Polynomial from_terms(int dim, const std::vector<std::pair<MultiIndex, double>>& terms,
                                 Point center = {});

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    // largest |s| with a nonzero coefficient (0 for the zero polynomial)
    int effective_degree() const;
    const Point& center() const { return center_; }
    const std::vector<MultiIndex>& indices() const { return *indices_; }
    std::span<const double> coefficients() const { return coef_; }
    std::span<double> coefficients() { return coef_; }
    double coefficient(const MultiIndex& s) const;
    void set(const MultiIndex& s, double c);

    // Plain floating-point evaluation.
    double operator()(std::span<const double> x) const;
    // Rigorous enclosure of the value at a point.
    Interval eval_point(std::span<const double> x) const;
    // Natural interval extension in the centred power basis.
    Interval eval_natural(const Box& box) const;

    Polynomial derivative(int axis) const;
    Polynomial operator-() const;
    Polynomial scaled(double s) const;
    // p + c (c added to the constant coefficient)
    Polynomial plus_constant(double c) const;

    std::string to_string() const;

private:
    int dim_ = 0;
    int degree_ = 0;
    Point center_;
    const std::vector<MultiIndex>* indices_ = nullptr;
    std::vector<double> coef_;
};

// Polynomial with its gradient polynomials prepared for repeated enclosure.
class PreparedPolynomial {
public:
    PreparedPolynomial() = default;
    explicit PreparedPolynomial(Polynomial p);

    const Polynomial& poly() const { return p_; }
    // Natural extension intersected with the mean-value form about the box midpoint.
    Interval enclose(const Box& box) const;
    Interval eval_point(std::span<const double> x) const { return p_.eval_point(x); }
    // Enclosure of each partial derivative over the box.
    std::vector<Interval> gradient(const Box& box) const;

private:
    Polynomial p_;
    std::vector<Polynomial> grad_;
};

Interval eval_poly_interval(const Polynomial& poly, const Box& box);

// Upper bound on sup ||grad p||_2 over the box from coefficient magnitudes of
// the gradient polynomials and the largest |x_j - center_j| on the box.
double lipschitz_bound(const Polynomial& poly, const Box& box);

} // namespace equilib
