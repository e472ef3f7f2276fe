#pragma once

// Sparse neighborhoods N of X x Y, sparse couplings and the transport cost.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gridot/grid.hpp"

namespace gridot {

// Inclusive 1-based coordinate range; empty when lo > hi.
struct Interval {
  std::int32_t lo = 1;
  std::int32_t hi = 0;

  bool empty() const noexcept { return lo > hi; }
  std::int64_t length() const noexcept { return empty() ? 0 : std::int64_t{hi} - lo + 1; }
  bool contains(std::int64_t c) const noexcept { return lo <= c && c <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Per source point: an axis-aligned box of target points plus a sorted list
// of extra target indices outside the box.
class Neighborhood {
 public:
  Neighborhood() = default;

  // `boxes` holds rank(target) intervals per source point, source-major.
  // Extra pairs are deduplicated and those already covered by a box dropped.
  Neighborhood(GridShape source, GridShape target, std::vector<Interval> boxes,
               std::vector<std::pair<std::int64_t, std::int64_t>> extra_pairs = {});

  // Empty boxes everywhere, only the given pairs.
  static Neighborhood from_pairs(GridShape source, GridShape target,
                                 std::vector<std::pair<std::int64_t, std::int64_t>> pairs);

  const GridShape& source_shape() const noexcept { return source_; }
  const GridShape& target_shape() const noexcept { return target_; }
  std::int64_t source_count() const noexcept { return source_.size(); }

  std::span<const Interval> box(std::int64_t source) const {
    const auto d = target_.rank();
    return {boxes_.data() + static_cast<std::size_t>(source) * d, d};
  }
  std::span<const std::int64_t> extras(std::int64_t source) const {
    const auto s = static_cast<std::size_t>(source);
    return {extra_targets_.data() + extra_begin_[s],
            static_cast<std::size_t>(extra_begin_[s + 1] - extra_begin_[s])};
  }
  std::int64_t box_volume(std::int64_t source) const;

  bool box_contains(std::int64_t source, std::int64_t target) const;
  bool contains(std::int64_t source, std::int64_t target) const;

  // Total number of (source, target) pairs.
  std::int64_t size() const noexcept { return size_; }
  std::int64_t targets_of(std::int64_t source) const {
    return box_volume(source) + static_cast<std::int64_t>(extras(source).size());
  }

  // Visits the targets of one source: box in row-major order, then extras ascending.
  template <typename Visitor>
  void for_each_target(std::int64_t source, Visitor&& visit) const;

  // Source-major visitation of every pair.
  template <typename Visitor>
  void for_each_pair(Visitor&& visit) const {
    for (std::int64_t s = 0; s < source_.size(); ++s) {
      for_each_target(s, [&](std::int64_t t) { visit(s, t); });
    }
  }

  friend bool operator==(const Neighborhood& a, const Neighborhood& b) {
    return a.source_ == b.source_ && a.target_ == b.target_ && a.boxes_ == b.boxes_ &&
           a.extra_begin_ == b.extra_begin_ && a.extra_targets_ == b.extra_targets_;
  }

 private:
  GridShape source_;
  GridShape target_;
  std::vector<Interval> boxes_;
  std::vector<std::int64_t> extra_begin_;
  std::vector<std::int64_t> extra_targets_;
  std::int64_t size_ = 0;
};

struct PlanEntry {
  std::int64_t source = 0;
  std::int64_t target = 0;
  Mass mass = 0;
  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// Sparse coupling. Entries are kept sorted by (source, target), masses are
// strictly positive and pairs unique.
class TransportPlan {
 public:
  TransportPlan() = default;
  TransportPlan(GridShape source, GridShape target, std::vector<PlanEntry> entries);

  const GridShape& source_shape() const noexcept { return source_; }
  const GridShape& target_shape() const noexcept { return target_; }
  std::span<const PlanEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const TransportPlan&, const TransportPlan&) = default;

 private:
  GridShape source_;
  GridShape target_;
  std::vector<PlanEntry> entries_;
};

// Dual variables; the reduced cost of (x, y) is c(x, y) - u[x] - v[y].
struct Potentials {
  std::vector<Cost> u;
  std::vector<Cost> v;
  friend bool operator==(const Potentials&, const Potentials&) = default;
};

// C(pi), recomputed from the grid coordinates.
Int128 plan_cost(const TransportPlan& plan);

bool check_marginals(const TransportPlan& plan, const ProblemInstance& inst);

Neighborhood full_neighborhood(const GridShape& source, const GridShape& target);

// Smallest superset of `n` (in this representation) containing supp(plan).
Neighborhood union_with_support(const Neighborhood& n, const TransportPlan& plan);

template <typename Visitor>
void Neighborhood::for_each_target(std::int64_t source, Visitor&& visit) const {
  const auto b = box(source);
  const auto d = b.size();
  bool empty_box = false;
  for (const auto& iv : b) empty_box = empty_box || iv.empty();
  if (!empty_box) {
    // Odometer over the box, last axis fastest.
    std::int64_t base = 0;
    for (std::size_t i = 0; i + 1 < d; ++i) base += (b[i].lo - 1) * target_.stride(i);
    std::vector<std::int32_t> cur(d);
    for (std::size_t i = 0; i < d; ++i) cur[i] = b[i].lo;
    const Interval last = b[d - 1];
    while (true) {
      for (std::int64_t t = base + last.lo - 1; t <= base + last.hi - 1; ++t) visit(t);
      std::size_t axis = d - 1;
      while (axis-- > 0) {
        if (cur[axis] < b[axis].hi) {
          ++cur[axis];
          base += target_.stride(axis);
          break;
        }
        base -= (cur[axis] - b[axis].lo) * target_.stride(axis);
        cur[axis] = b[axis].lo;
      }
      if (axis == static_cast<std::size_t>(-1)) break;
    }
  }
  for (auto t : extras(source)) visit(t);
}

}  // namespace gridot
