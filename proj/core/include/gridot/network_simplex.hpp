#pragma once

// Primal network simplex for the uncapacitated bipartite transport network.
//
// Nodes are the source points, then the target points, then one artificial
// root. Every real node owns one artificial arc to or from the root (cost M);
// these form the starting basis. The real arc set can be replaced while the
// basis is kept (`replace_arcs`), so a restricted problem can be re-solved
// after its neighborhood changes without starting over.
//
// Storage follows the usual spanning-tree layout: per node parent, predecessor
// arc, orientation, thread / reverse thread, subtree size, last successor and
// potential; per arc tail, head, cost, flow, state. All of it lives in flat
// vectors indexed by node / arc id.

#include <cstdint>
#include <tuple>
#include <vector>

#include "gridot/grid.hpp"
#include "gridot/sparsity.hpp"

namespace gridot {

struct SolveStats {
  std::int64_t pivots = 0;
  std::int64_t entering_scans = 0;  // arcs priced while searching for an entering arc
  std::int64_t arc_replacements = 0;
  std::int64_t outer_iterations = 0;

  SolveStats& operator+=(const SolveStats& o) {
    pivots += o.pivots;
    entering_scans += o.entering_scans;
    arc_replacements += o.arc_replacements;
    outer_iterations += o.outer_iterations;
    return *this;
  }
  friend bool operator==(const SolveStats&, const SolveStats&) = default;
};

struct ReplaceStats {
  std::int64_t added = 0;
  std::int64_t removed = 0;
  std::int64_t retained_basic_outside = 0;  // basic arcs kept although not in the new set
  std::int64_t arc_count = 0;               // real arcs after the replacement
};

// (tail, head, flow) over all arcs with positive flow, artificial ones included.
using FlowSnapshot = std::vector<std::tuple<std::int32_t, std::int32_t, Mass>>;

class NetworkSimplex {
 public:
  NetworkSimplex(const ProblemInstance& inst, const Neighborhood& arcs);

  // Pivots until no arc of the current set has negative reduced cost.
  // Throws InfeasibleRestriction if artificial arcs still carry flow.
  SolveStats run_pivots();

  // One pivot; false when the basis is already optimal for the current arcs.
  bool pivot_once();

  // New real arc set = basic arcs U pairs of `arcs`. Flows, tree and
  // potentials are untouched.
  ReplaceStats replace_arcs(const Neighborhood& arcs);

  TransportPlan current_plan() const;
  Potentials current_potentials() const;

  // Objective including artificial arcs.
  Int128 objective() const;
  Mass artificial_flow() const;

  // Every real arc has reduced cost >= 0 and every basic arc reduced cost 0.
  bool assert_optimal_basis() const;

  // Full structural check: spanning tree, thread order, subtree sizes,
  // flow conservation, zero flow off the basis, zero reduced cost on it.
  bool check_invariants() const;

  FlowSnapshot flow_snapshot() const;

  const SolveStats& stats() const noexcept { return stats_; }
  Cost big_m() const noexcept { return big_m_; }
  std::int64_t node_count() const noexcept { return node_count_; }
  std::int64_t arc_count() const noexcept { return arc_count_ - first_real_arc_; }
  std::int32_t block_size() const noexcept { return block_size_; }

 private:
  enum : std::int8_t { kTree = 0, kLower = 1 };
  enum : std::int8_t { kDown = -1, kUp = 1 };

  void add_real_arc(std::int32_t source_node, std::int32_t target_node, std::int8_t state,
                    Mass flow);
  Cost arc_cost(std::int32_t tail, std::int32_t head) const;
  Cost cost_of(std::int32_t arc) const {
    return arc < first_real_arc_ ? big_m_ : Cost{cost_[arc]};
  }
  Cost reduced_cost(std::int32_t arc) const {
    return cost_of(arc) + pi_[tail_[arc]] - pi_[head_[arc]];
  }
  void reset_pricing();

  bool find_entering_arc();
  void find_join_node();
  bool find_leaving_arc();
  void change_flow();
  void update_tree_structure();
  void update_potential();

  std::int32_t source_count_ = 0;
  std::int32_t target_count_ = 0;
  std::int32_t node_count_ = 0;  // real nodes; the root has id node_count_
  std::int32_t root_ = 0;
  Cost big_m_ = 0;

  CoordinateTable source_coords_;
  CoordinateTable target_coords_;
  GridShape source_shape_;
  GridShape target_shape_;

  // node data, size node_count_ + 1
  std::vector<Mass> supply_;
  std::vector<Cost> pi_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> pred_;
  std::vector<std::int8_t> pred_dir_;
  std::vector<std::int32_t> thread_;
  std::vector<std::int32_t> rev_thread_;
  std::vector<std::int32_t> succ_num_;
  std::vector<std::int32_t> last_succ_;
  std::vector<std::int32_t> dirty_revs_;

  // arc data; ids [0, node_count_) are artificial (arc i belongs to node i),
  // real arcs follow in source-major order
  std::vector<std::int32_t> tail_;
  std::vector<std::int32_t> head_;
  std::vector<std::int32_t> cost_;  // real arcs only; artificial arcs cost big_m_
  std::vector<Mass> flow_;
  std::vector<std::int8_t> state_;
  std::int32_t first_real_arc_ = 0;
  std::int32_t arc_count_ = 0;
  std::vector<std::int32_t> source_arc_begin_;  // size source_count_ + 1

  // pivot scratch
  std::int32_t block_size_ = 1;
  std::int32_t next_arc_ = 0;
  std::int32_t in_arc_ = -1;
  std::int32_t join_ = -1;
  std::int32_t u_in_ = -1;
  std::int32_t v_in_ = -1;
  std::int32_t u_out_ = -1;
  Mass delta_ = 0;

  SolveStats stats_;
};

}  // namespace gridot
