#pragma once

// Sparse fixed-point loop (solve on N, rebuild N as the shielding
// neighborhood of the new plan, warm-start) and the multi-scale driver.

#include <cstdint>
#include <vector>

#include "gridot/grid.hpp"
#include "gridot/network_simplex.hpp"
#include "gridot/sparsity.hpp"

namespace gridot {

struct Solution {
  TransportPlan plan;
  Potentials potentials;
  Int128 cost = 0;
  SolveStats stats;
  std::int64_t final_neighborhood_size = 0;
  // Objective after every run of pivots, in order. Non-increasing.
  std::vector<Int128> cost_history;
};

// Hooks into the outer loop, mainly for tests and diagnostics.
class SolveObserver {
 public:
  virtual ~SolveObserver() = default;
  virtual void before_replace(const NetworkSimplex&) {}
  virtual void after_replace(const NetworkSimplex&, const ReplaceStats&) {}
  virtual void after_pivots(const NetworkSimplex&, const SolveStats&) {}
  // Called once when the loop has converged, before the state is discarded.
  virtual void on_converged(const NetworkSimplex&, const Neighborhood& /*final_neighborhood*/) {}
};

struct SolveOptions {
  std::int64_t coarsest_max_extent = 8;
  std::int64_t max_outer_iterations = 1000;
  SolveObserver* observer = nullptr;
};

Solution solve_sparse(const ProblemInstance& inst, const Neighborhood& initial,
                      const SolveOptions& opts = {});

Solution solve_multiscale(const ProblemInstance& inst, const SolveOptions& opts = {});

// solve_sparse started from the full product X x Y.
Solution solve_dense(const ProblemInstance& inst, const SolveOptions& opts = {});

}  // namespace gridot
