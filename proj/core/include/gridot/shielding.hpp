#pragma once

// Shielding neighborhoods for the squared Euclidean cost on grids.
//
// A support pair (x_s, y_s) with x_s grid-adjacent to x shields (x, y) when
//   c(x, y) + c(x_s, y_s) > c(x, y_s) + c(x_s, y),
// which for the squared Euclidean cost reads <x_s - x, y - y_s> > 0. A
// coupling that is optimal on a neighborhood containing every unshielded
// pair is globally optimal.

#include "gridot/grid.hpp"
#include "gridot/sparsity.hpp"

namespace gridot {

// Per source x the box of targets no adjacent support pair shields, united
// with supp(plan). Along axis i the box is clamped from above by the smallest
// i-th target coordinate of x + e_i and from below by the largest of x - e_i.
Neighborhood shielding_neighborhood(const TransportPlan& plan, const ProblemInstance& inst);

// Definitional check by enumeration of the adjacent support.
bool is_shielded(const GridPoint& x, const GridPoint& y, const TransportPlan& plan);

// Brute force over all |X| * |Y| pairs: every pair outside `n` is shielded.
bool verify_shielding(const Neighborhood& n, const TransportPlan& plan);

}  // namespace gridot
