#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equilib/geometry.hpp"

namespace equilib {

// normal . x <= offset
struct HalfSpace {
    Point normal;
    double offset = 0.0;
    bool operator==(const HalfSpace&) const = default;
};

// Bounded convex polytope { x : normal_i . x <= offset_i }.
//
// Construction verifies boundedness (the recession cone must be {0}) and
// caches the vertex set, which is computed by enumerating d-subsets of the
// constraints. That is only sensible for the small dimensions used here.
class Polytope {
public:
    Polytope() = default;
    Polytope(int dim, std::vector<HalfSpace> rows);
    static Polytope from_box(const Box& box);

    int dim() const { return dim_; }
    const std::vector<HalfSpace>& rows() const { return rows_; }
    bool empty() const { return vertices_.empty(); }
    const std::vector<Point>& vertices() const { return vertices_; }
    // Tight axis-aligned bounding box (throws EmptyPolytope if empty).
    const Box& bounding_box() const;
    // Set when the polytope is exactly an axis-aligned box.
    const std::optional<Box>& as_box() const { return box_; }

    bool contains(std::span<const double> x, double tol = 1e-12) const;
    // max c.x over the polytope
    double maximize(std::span<const double> c) const;

    // Nonempty intersection with a box, decided exactly up to tol.
    bool intersects(const Box& box, double tol = 1e-12) const;
    bool contains_box(const Box& box, double tol = 1e-12) const;
    // this intersected with the box (as a new polytope)
    Polytope clipped(const Box& box) const;

    // Image under x' = s x.
    Polytope scaled(double s) const;
    std::string to_string() const;

private:
    int dim_ = 0;
    std::vector<HalfSpace> rows_;
    std::vector<Point> vertices_;
    Box bbox_;
    std::optional<Box> box_;
};

// Vertices of { x : rows } assuming the set is bounded; empty when infeasible.
std::vector<Point> enumerate_vertices(int dim, const std::vector<HalfSpace>& rows, double tol = 1e-10);

// Euclidean projection of x onto the polytope intersected with an optional
// box: exact clamping for boxes, Dykstra's alternating projections otherwise.
Point project(std::span<const double> x, const Polytope& X, const Box* clip = nullptr);

} // namespace equilib
