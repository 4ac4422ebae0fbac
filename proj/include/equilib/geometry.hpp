#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace equilib {

inline constexpr int kMaxDim = 4;

using Point = std::vector<double>;

double norm_inf(std::span<const double> v);
double norm2(std::span<const double> v);
double dist_inf(std::span<const double> a, std::span<const double> b);
double dist2(std::span<const double> a, std::span<const double> b);

// Axis-aligned box  x_j in [lo_j, hi_j].
struct Box {
    Point lo;
    Point hi;

    Box() = default;
    Box(Point lo_, Point hi_);

    int dim() const { return static_cast<int>(lo.size()); }
    Point center() const;
    double width(int j) const { return hi[j] - lo[j]; }
    double max_width() const;
    // Euclidean length of the main diagonal.
    double diameter() const;
    bool contains(std::span<const double> x, double tol = 0.0) const;
    bool contains(const Box& other, double tol = 0.0) const;
    bool intersects(const Box& other, double tol = 0.0) const;
    Box intersection(const Box& other) const; // may be inverted if disjoint
    bool empty() const;
    Box inflated(double margin) const;
    Point clamp(std::span<const double> x) const;
    // Euclidean / sup-norm distance from the box to a point (0 inside).
    double distance2_to(std::span<const double> x) const;
    double distance_inf_to(std::span<const double> x) const;

    std::string to_string() const;
    bool operator==(const Box&) const = default;
};

} // namespace equilib
