#pragma once

// Dyadic coarse-to-fine pyramid and the neighborhood refinement between levels.

#include <cstdint>
#include <span>
#include <vector>

#include "gridot/grid.hpp"
#include "gridot/sparsity.hpp"

namespace gridot {

// Fine-to-coarse index map between two consecutive levels of one measure.
class ScaleMap {
 public:
  ScaleMap() = default;
  ScaleMap(const GridShape& fine, const GridShape& coarse);

  std::int64_t parent(std::int64_t fine_index) const {
    return parent_[static_cast<std::size_t>(fine_index)];
  }
  std::span<const std::int64_t> children(std::int64_t coarse_index) const {
    const auto c = static_cast<std::size_t>(coarse_index);
    return {child_.data() + child_begin_[c],
            static_cast<std::size_t>(child_begin_[c + 1] - child_begin_[c])};
  }

 private:
  std::vector<std::int64_t> parent_;
  std::vector<std::int64_t> child_begin_;
  std::vector<std::int64_t> child_;
};

// Half the extent per axis, rounded up.
GridShape coarsen(const GridShape& shape);

// Sums 2 x ... x 2 blocks (1 wide at the far end of an odd axis).
DiscreteMeasure coarsen(const DiscreteMeasure& m);

class Pyramid {
 public:
  // Level 0 is the input; level k+1 coarsens level k until both grids have
  // max extent <= coarsest_max_extent.
  explicit Pyramid(const ProblemInstance& inst, std::int64_t coarsest_max_extent = 8);

  std::size_t level_count() const noexcept { return levels_.size(); }
  const ProblemInstance& level(std::size_t k) const { return levels_.at(k); }
  const ProblemInstance& coarsest() const { return levels_.back(); }

  // Maps between level k (fine) and level k + 1 (coarse).
  const ScaleMap& source_map(std::size_t k) const { return source_maps_.at(k); }
  const ScaleMap& target_map(std::size_t k) const { return target_maps_.at(k); }

 private:
  std::vector<ProblemInstance> levels_;
  std::vector<ScaleMap> source_maps_;
  std::vector<ScaleMap> target_maps_;
};

inline Pyramid build_pyramid(const ProblemInstance& inst, std::int64_t coarsest_max_extent = 8) {
  return Pyramid(inst, coarsest_max_extent);
}

// Initial neighborhood at `fine_level` from a plan at fine_level + 1: each fine
// source gets the hull of the fine children of every coarse target coupled to
// its coarse parent or an axis-adjacent coarse source. Parents without
// coupled neighbors widen the search ring until one is found.
Neighborhood refine_neighborhood(const TransportPlan& coarse_plan, const Pyramid& pyramid,
                                 std::size_t fine_level);

}  // namespace gridot
