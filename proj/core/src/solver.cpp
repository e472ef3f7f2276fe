#include "gridot/solver.hpp"

#include <cassert>
#include <stdexcept>

#include "gridot/errors.hpp"
#include "gridot/multiscale.hpp"
#include "gridot/shielding.hpp"

namespace gridot {

Solution solve_sparse(const ProblemInstance& inst, const Neighborhood& initial,
                      const SolveOptions& opts) {
  SolveObserver* obs = opts.observer;
  NetworkSimplex simplex(inst, initial);

  Solution sol;
  auto pivot = [&] {
    const auto delta = simplex.run_pivots();
    sol.cost_history.push_back(simplex.objective());
    if (obs) obs->after_pivots(simplex, delta);
    return delta;
  };

  pivot();
  Neighborhood current;
  std::int64_t outer = 0;
  while (true) {
    if (++outer > opts.max_outer_iterations) {
      throw Error("sparse solver did not reach a shielding fixed point within " +
                  std::to_string(opts.max_outer_iterations) + " outer iterations");
    }
    current = shielding_neighborhood(simplex.current_plan(), inst);
    if (obs) obs->before_replace(simplex);
    const auto rs = simplex.replace_arcs(current);
    if (obs) obs->after_replace(simplex, rs);
    const auto delta = pivot();
    const auto n = sol.cost_history.size();
    assert(sol.cost_history[n - 1] <= sol.cost_history[n - 2]);
    (void)n;
    if (delta.pivots == 0) break;
  }
  if (obs) obs->on_converged(simplex, current);

  sol.plan = simplex.current_plan();
  sol.potentials = simplex.current_potentials();
  sol.cost = simplex.objective();
  sol.stats = simplex.stats();
  sol.stats.outer_iterations = outer;
  sol.final_neighborhood_size = current.size();
  return sol;
}

Solution solve_dense(const ProblemInstance& inst, const SolveOptions& opts) {
  return solve_sparse(inst, full_neighborhood(inst.mu().shape(), inst.nu().shape()), opts);
}

Solution solve_multiscale(const ProblemInstance& inst, const SolveOptions& opts) {
  const Pyramid pyramid(inst, opts.coarsest_max_extent);
  std::size_t k = pyramid.level_count() - 1;
  const auto& top = pyramid.level(k);
  Solution sol = solve_dense(top, opts);
  SolveStats total = sol.stats;
  while (k-- > 0) {
    const auto initial = refine_neighborhood(sol.plan, pyramid, k);
    sol = solve_sparse(pyramid.level(k), initial, opts);
    total += sol.stats;
  }
  sol.stats = total;
  return sol;
}

}  // namespace gridot
