#include "gridot/shielding.hpp"

#include <algorithm>
#include <limits>

#include "gridot/errors.hpp"

namespace gridot {

namespace {

// Plan entries bucketed by source.
struct SupportIndex {
  std::vector<std::int64_t> begin;
  std::vector<std::int64_t> targets;

  explicit SupportIndex(const TransportPlan& plan) {
    const auto n = static_cast<std::size_t>(plan.source_shape().size());
    begin.assign(n + 1, 0);
    for (const auto& e : plan.entries()) ++begin[static_cast<std::size_t>(e.source) + 1];
    for (std::size_t s = 0; s < n; ++s) begin[s + 1] += begin[s];
    targets.resize(plan.size());
    // Entries are sorted by source, so a straight copy is already bucketed.
    for (std::size_t k = 0; k < plan.size(); ++k) targets[k] = plan.entries()[k].target;
  }

  std::span<const std::int64_t> of(std::int64_t s) const {
    const auto b = begin[static_cast<std::size_t>(s)];
    const auto e = begin[static_cast<std::size_t>(s) + 1];
    return {targets.data() + b, static_cast<std::size_t>(e - b)};
  }
};

bool shielded_by_adjacent(std::span<const std::int32_t> x, std::span<const std::int32_t> y,
                          std::int64_t x_index, const GridShape& source_shape,
                          const SupportIndex& support, const CoordinateTable& target_coords) {
  const auto d = x.size();
  for (std::size_t i = 0; i < d; ++i) {
    for (const int sign : {+1, -1}) {
      const std::int64_t c = x[i] + sign;
      if (c < 1 || c > source_shape.extent(i)) continue;
      const std::int64_t neighbor = x_index + sign * source_shape.stride(i);
      for (auto t : support.of(neighbor)) {
        // <x_s - x, y - y_s> with x_s - x = sign * e_i
        if (sign * (static_cast<std::int64_t>(y[i]) - target_coords[t][i]) > 0) return true;
      }
    }
  }
  return false;
}

}  // namespace

Neighborhood shielding_neighborhood(const TransportPlan& plan, const ProblemInstance& inst) {
  const auto& src = inst.mu().shape();
  const auto& tgt = inst.nu().shape();
  if (!(plan.source_shape() == src) || !(plan.target_shape() == tgt)) {
    throw InvalidArgument("plan and instance live on different grids");
  }
  const auto d = src.rank();
  const auto n = src.size();
  const CoordinateTable target_coords(tgt);

  // Coordinate-wise min / max over the targets of each source.
  constexpr auto kNone = std::numeric_limits<std::int32_t>::min();
  std::vector<std::int32_t> lo_coord(static_cast<std::size_t>(n) * d, kNone);
  std::vector<std::int32_t> hi_coord(static_cast<std::size_t>(n) * d, kNone);
  std::vector<char> has_support(static_cast<std::size_t>(n), 0);
  for (const auto& e : plan.entries()) {
    const auto y = target_coords[e.target];
    auto* lo = lo_coord.data() + static_cast<std::size_t>(e.source) * d;
    auto* hi = hi_coord.data() + static_cast<std::size_t>(e.source) * d;
    const bool first = !has_support[static_cast<std::size_t>(e.source)];
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = first ? y[i] : std::min(lo[i], y[i]);
      hi[i] = first ? y[i] : std::max(hi[i], y[i]);
    }
    has_support[static_cast<std::size_t>(e.source)] = 1;
  }
  for (std::int64_t s = 0; s < n; ++s) {
    if (inst.mu().mass(s) > 0 && !has_support[static_cast<std::size_t>(s)]) {
      throw InvalidArgument("source point " + std::to_string(s) +
                            " has positive mass but no plan entry");
    }
  }

  const CoordinateTable source_coords(src);
  std::vector<Interval> boxes(static_cast<std::size_t>(n) * d);
  for (std::int64_t s = 0; s < n; ++s) {
    const auto x = source_coords[s];
    auto* box = boxes.data() + static_cast<std::size_t>(s) * d;
    for (std::size_t i = 0; i < d; ++i) {
      std::int32_t lo = 1;
      auto hi = static_cast<std::int32_t>(tgt.extent(i));
      if (x[i] < src.extent(i)) {
        const auto up = s + src.stride(i);
        if (has_support[static_cast<std::size_t>(up)]) {
          hi = lo_coord[static_cast<std::size_t>(up) * d + i];
        }
      }
      if (x[i] > 1) {
        const auto down = s - src.stride(i);
        if (has_support[static_cast<std::size_t>(down)]) {
          lo = hi_coord[static_cast<std::size_t>(down) * d + i];
        }
      }
      box[i] = Interval{lo, hi};
    }
  }
  return union_with_support(Neighborhood(src, tgt, std::move(boxes)), plan);
}

bool is_shielded(const GridPoint& x, const GridPoint& y, const TransportPlan& plan) {
  const auto& src = plan.source_shape();
  const auto& tgt = plan.target_shape();
  const auto x_index = src.flat_index(x);
  tgt.flat_index(y);  // range check
  for (const auto& e : plan.entries()) {
    const auto xs = src.point_of(e.source);
    std::int64_t l1 = 0;
    for (std::size_t i = 0; i < x.rank(); ++i) l1 += std::abs(xs.coords[i] - x.coords[i]);
    if (l1 != 1 || e.source == x_index) continue;
    const auto ys = tgt.point_of(e.target);
    const Cost lhs = sq_euclidean_cost(x, y) + sq_euclidean_cost(xs, ys);
    const Cost rhs = sq_euclidean_cost(x, ys) + sq_euclidean_cost(xs, y);
    if (lhs > rhs) return true;
  }
  return false;
}

bool verify_shielding(const Neighborhood& n, const TransportPlan& plan) {
  if (!(n.source_shape() == plan.source_shape()) || !(n.target_shape() == plan.target_shape())) {
    throw InvalidArgument("plan and neighborhood live on different grids");
  }
  const auto& src = plan.source_shape();
  const auto& tgt = plan.target_shape();
  const SupportIndex support(plan);
  const CoordinateTable source_coords(src);
  const CoordinateTable target_coords(tgt);
  for (std::int64_t s = 0; s < src.size(); ++s) {
    for (std::int64_t t = 0; t < tgt.size(); ++t) {
      if (n.contains(s, t)) continue;
      if (!shielded_by_adjacent(source_coords[s], target_coords[t], s, src, support,
                                target_coords)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace gridot
