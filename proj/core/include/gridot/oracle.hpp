#pragma once

// Reference solver for small instances: successive shortest paths with node
// potentials on the dense bipartite graph. Shares no code with the simplex.

#include <cstdint>

#include "gridot/grid.hpp"
#include "gridot/sparsity.hpp"

namespace gridot {

inline constexpr std::int64_t kOraclePairBudget = 1'000'000;

struct OracleResult {
  Int128 cost = 0;
  TransportPlan plan;
};

// Throws BudgetExceeded when |X| * |Y| > kOraclePairBudget.
OracleResult oracle_solve(const ProblemInstance& inst);

}  // namespace gridot
