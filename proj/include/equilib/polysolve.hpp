#pragma once

#include <cstddef>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/polynomial.hpp"
#include "equilib/polytope.hpp"

namespace equilib {

struct KernelOptions {
    std::size_t budget = 1'000'000; // boxes examined before BudgetExceeded
};

// Two-sided answer of the feasibility kernel.
struct SolveOutcome {
    enum class Kind { Found, Infeasible };
    Kind kind = Kind::Infeasible;
    Point point;                    // Found: satisfies every p <= 0 (rigorously)
    std::vector<double> residuals;  // Found: upper bounds of p(point)
    double threshold = 0.0;         // the gap eps of the certificate
    std::size_t boxes = 0;          // boxes examined

    bool found() const { return kind == Kind::Found; }
};

// Decides { x in X intersected with box : p_l(x) <= 0 for all l }.
// Found: the returned point satisfies every inequality. Infeasible: no point
// of X in the box has p_l(x) <= -eps for all l.
SolveOutcome solve_system(const std::vector<Polynomial>& polys, const Polytope& X, const Box& box, double eps,
                          const KernelOptions& options = {});

} // namespace equilib
