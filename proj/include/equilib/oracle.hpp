#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/multi_index.hpp"
#include "equilib/polytope.hpp"
#include "equilib/potential.hpp"

namespace equilib {

// Ground truth by exhaustive evaluation; slow but independent of the solver.

struct ScanPoint {
    Point x;
    double residual = 0.0; // ||grad f(x)||_inf
};

struct ScanReport {
    double h = 0.0;
    double threshold = 0.0;
    std::vector<ScanPoint> points; // residual <= threshold, lexicographic grid order
    double min_residual = 0.0;     // over every scanned point
    Point argmin;
    std::size_t scanned = 0;

    // Sorted point list with fixed decimal formatting.
    std::string to_text() const;
};

inline constexpr double kScanCap = 1e8;

// Uniform grid lo + i h over the bounding box of X, restricted to X and to
// points away from the charges. Throws TooFine above kScanCap points.
ScanReport brute_force_scan(const ChargeSystem& sys, const Polytope& X, double threshold, double h,
                            unsigned threads = 1);

struct BisectResult {
    double x = 0.0; // distance from the first charge
    int iterations = 0;
    double width = 0.0; // final bracket width
};

// Zero of the axial force between positive charges q1 at 0 and q2 at `separation`.
BisectResult two_charge_bisect(double q1, double q2, double separation, double tol);

// Nested central differences for D^s f. h <= 0 picks a step from the distance
// to the nearest charge.
double finite_difference(const ChargeSystem& sys, std::span<const double> x, const MultiIndex& s, double h = 0.0);

struct NewtonResult {
    Point x;
    int iterations = 0;
    bool converged = false; // ||grad f||_inf <= kNewtonTolerance
    double residual = 0.0;
};

inline constexpr double kNewtonTolerance = 1e-12;

// Damped Newton on grad f. Throws SingularHessian when a Newton step cannot be
// formed.
NewtonResult newton_refine(const ChargeSystem& sys, std::span<const double> x0, int max_iters = 50);

} // namespace equilib
