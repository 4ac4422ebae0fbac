#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/grid.hpp"
#include "equilib/polysolve.hpp"
#include "equilib/polytope.hpp"
#include "equilib/potential.hpp"
#include "equilib/taylor.hpp"
#include "equilib/wellbehaved.hpp"

namespace equilib {

// Everything the solver did on one grid cell (normalized units).
struct CellReport {
    std::size_t piece = 0;
    std::array<int, kMaxDim> index{};
    Box cell;
    Point anchor;
    int branch = 0;                  // strong solver: +1 / -1 determinant sign, 0 for weak
    std::vector<TaylorModel> models; // gradient components first, then the determinant
    SolveOutcome outcome;
};

struct SolverOptions {
    std::size_t budget = 1'000'000; // kernel boxes per cell
    unsigned threads = 1;
    bool enumerate_all = false;     // weak solver: collect every Found cell
    std::function<void(const CellReport&)> observer; // called for every modeled cell, in order
};

struct SolveStats {
    double rho = 0.0;                // exclusion radius (normalized)
    WellBehavedParams potential;     // parameters of f
    WellBehavedParams gradient;      // parameters of the gradient components
    WellBehavedParams determinant;   // strong solver only
    int nominal_degree = 0;          // Taylor order k from the global parameters
    std::size_t pieces = 0;
    std::size_t grid_cells = 0;      // sum over pieces of the full grid size
    std::size_t blocks = 0;          // interval blocks examined by the pre-filter
    std::size_t cells_modeled = 0;
    std::size_t kernel_boxes = 0;
};

struct WeakAnswer {
    enum class Kind { Point, NoDeltaSolution };
    Kind kind = Kind::NoDeltaSolution;
    Point x;                        // original units
    Point gradient;                 // grad f(x)
    double residual = 0.0;          // ||grad f(x)||_inf
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<Point> all_points;  // enumerate_all mode
    SolveStats stats;

    bool found() const { return kind == Kind::Point; }
};

// The grid solve_weak works on, in normalized units: exclusion radius for
// ||grad f||_inf <= exclusion_eps, domain pieces, and per-piece cuts of the
// gradient components.
struct WeakGrid {
    double rho = 0.0;
    WellBehaved potential;
    WellBehaved gradient;
    std::vector<DomainPiece> pieces;
    std::vector<AxisCuts> cuts; // one per piece
};
WeakGrid weak_grid(const ChargeSystem& sys, const Polytope& X, double exclusion_eps);

// Either a point with ||grad f||_inf <= eps, or a certificate that no point of
// X has ||grad f||_inf <= delta. Requires eps > delta > 0.
WeakAnswer solve_weak(const ChargeSystem& sys, const Polytope& X, double eps, double delta,
                      const SolverOptions& options = {});

struct StrongParams {
    double delta_prime = 0.0;
    double alpha = 0.0;
    double eps_prime = 0.0;
};

StrongParams strong_params(double B, double C, double beta_min, double delta, double eps, int d);

struct StrongAnswer {
    Point x;                  // original units
    double radius = 0.0;      // eps requested
    double hessian_det = 0.0; // det of the Hessian at x
    double alpha = 0.0;       // half-width of the certified box
    double eps_prime = 0.0;   // gradient tolerance used on the winning cell
    double delta = 0.0;
    int sign = 0;             // sign branch of the determinant
    bool certified = false;
};

struct StrongResult {
    enum class Status { Found, NotFound, Exhausted };
    Status status = Status::NotFound;
    StrongAnswer answer;
    StrongParams global;      // delta', alpha, eps' from the global well-behaved parameters
    double delta_floor = 0.0; // Exhausted: smallest delta tried
    std::string reason;
    SolveStats stats;

    bool found() const { return status == Status::Found; }
};

StrongResult solve_strong(const ChargeSystem& sys, const Polytope& X, double eps, double delta,
                          const SolverOptions& options = {});

inline constexpr double kDefaultDeltaFloor = 0x1p-40;
StrongResult solve_strong_auto(const ChargeSystem& sys, const Polytope& X, double eps,
                               const SolverOptions& options = {}, double delta_floor = kDefaultDeltaFloor);

struct PmReport {
    bool certified = false;
    bool analytic = false;          // decided by the analytic bound
    std::vector<double> bound;      // per axis bound on |h_j(u) - u_j|
    double det = 0.0;               // det of the Hessian at x
    std::size_t samples = 0;        // face samples used by the fallback
};

// Poincare-Miranda check on x + [-alpha, alpha]^d for h(u) = A^{-1} grad f(x + u).
// spacing <= 0 selects alpha / 8 for the face-sampling fallback.
PmReport certify_pm_report(const ChargeSystem& sys, std::span<const double> x, double alpha, double spacing = 0.0);
bool certify_pm(const ChargeSystem& sys, std::span<const double> x, double alpha);

} // namespace equilib
