#pragma once

#include <span>
#include <vector>

#include "equilib/geometry.hpp"
#include "equilib/interval.hpp"
#include "equilib/potential.hpp"

namespace equilib {

// Rigorous range enclosures of the field over a box that stays away from
// every charge: natural interval extension intersected with the mean-value
// form about the box centre.
std::vector<Interval> gradient_enclosure(std::span<const Charge> charges, const Box& box);
// Row-major d x d, natural extension only.
std::vector<Interval> hessian_enclosure(std::span<const Charge> charges, const Box& box);
Interval hessian_det_enclosure(std::span<const Charge> charges, const Box& box);

// Interval determinant of a symmetric row-major matrix (d <= 4).
Interval interval_determinant(std::span<const Interval> m, int d);

} // namespace equilib
