#pragma once

#include <string>
#include <vector>

#include "equilib/equilibrium.hpp"

namespace equilib {

// The solver's grid mapped back to the caller's units, ready for dumping.
struct GridLayout {
    int dim = 0;
    double rho = 0.0;                  // exclusion half-width
    Box bounds;                        // bounding box of the domain
    std::vector<Point> domain_vertices;
    std::vector<Charge> charges;
    std::vector<Box> exclusion_boxes;  // one per charge
    std::vector<Box> cover_boxes;      // every cover cube of the beta schedule, clipped to bounds
    std::vector<Box> piece_bounds;     // bounding box of each domain piece
    std::vector<AxisCuts> cuts;        // per piece
    WellBehavedParams params;          // of the gradient components
};

GridLayout grid_layout(const ChargeSystem& sys, const Polytope& X, double eps);

// "piece,axis,index,cut" header, then one line per cut.
std::string grid_csv(const GridLayout& g);
// d = 2 only; throws InvalidInput otherwise.
std::string grid_svg(const GridLayout& g);

} // namespace equilib
