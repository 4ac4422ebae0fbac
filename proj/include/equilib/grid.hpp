#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/polytope.hpp"
#include "equilib/potential.hpp"
#include "equilib/wellbehaved.hpp"

namespace equilib {

// Side half-length of the sup-norm box around each charge that contains no
// point with ||grad f||_inf <= eps:  1 / (d sqrt(d) (4 n q_max + eps)).
// Uses the normalized q_max of the system. Throws TooFewCharges for n < 2.
double exclusion_radius(const ChargeSystem& sys, double eps);
double exclusion_radius_formula(int dim, std::size_t n, double q_max, double eps);

struct DomainPiece {
    Box slab;        // product of the per-axis intervals between splitting planes
    Polytope region; // X intersected with the slab
};

// Splits X by the planes x_j = a_ij +- rho. Pieces inside a charge's rho-box and
// empty pieces are dropped. Coordinates of `sys` are used as given, so pass a
// normalized system together with a normalized X.
std::vector<DomainPiece> split_domain(const Polytope& X, const ChargeSystem& sys, double rho);

struct AxisCuts {
    std::vector<std::vector<double>> cuts; // sorted, merged, per axis

    int dim() const { return static_cast<int>(cuts.size()); }
    std::size_t cell_count() const;
    Box cell_box(std::span<const int> index) const;
};

// Beta schedule beta_min 2^t, t = 0..t_max, with t_max >= 1 the smallest
// exponent reaching the given width.
std::vector<double> beta_schedule(double beta_min, double width);

inline constexpr double kCutMergeTolerance = 1e-12;

AxisCuts build_axis_cuts(const std::vector<WellBehaved>& functions, const Polytope& X);

// Sum over functions of (1 + 4 C d)(1 + sum_t n_beta_t): an upper bound on the
// number of cuts per axis before merging.
std::size_t axis_cut_bound(const std::vector<WellBehaved>& functions, const Polytope& X);

struct GridCell {
    Box box;
    Point anchor; // projection of the box centre onto box intersected with X
    std::array<int, kMaxDim> index{};
};

// Streams every minimal cell meeting X in lexicographic index order (first
// axis slowest). Return false from the sink to stop early.
void enumerate_cells(const AxisCuts& cuts, const Polytope& X, const std::function<bool(const GridCell&)>& sink);
std::vector<GridCell> collect_cells(const AxisCuts& cuts, const Polytope& X);

// Anchor for a cell, or nullopt if the cell misses X.
std::optional<Point> cell_anchor(const Box& cell, const Polytope& X);

} // namespace equilib
