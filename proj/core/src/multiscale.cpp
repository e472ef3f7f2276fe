#include "gridot/multiscale.hpp"

#include <algorithm>
#include <limits>

#include "gridot/errors.hpp"

namespace gridot {

GridShape coarsen(const GridShape& shape) {
  std::vector<std::int64_t> dims(shape.dims().begin(), shape.dims().end());
  for (auto& d : dims) d = (d + 1) / 2;
  return GridShape(std::move(dims));
}

ScaleMap::ScaleMap(const GridShape& fine, const GridShape& coarse) {
  const auto d = fine.rank();
  parent_.resize(static_cast<std::size_t>(fine.size()));
  const CoordinateTable coords(fine);
  child_begin_.assign(static_cast<std::size_t>(coarse.size()) + 1, 0);
  for (std::int64_t f = 0; f < fine.size(); ++f) {
    const auto x = coords[f];
    std::int64_t c = 0;
    for (std::size_t i = 0; i < d; ++i) c += ((x[i] - 1) / 2) * coarse.stride(i);
    parent_[static_cast<std::size_t>(f)] = c;
    ++child_begin_[static_cast<std::size_t>(c) + 1];
  }
  for (std::size_t c = 1; c < child_begin_.size(); ++c) child_begin_[c] += child_begin_[c - 1];
  child_.resize(static_cast<std::size_t>(fine.size()));
  std::vector<std::int64_t> fill(child_begin_.begin(), child_begin_.end() - 1);
  for (std::int64_t f = 0; f < fine.size(); ++f) {
    child_[static_cast<std::size_t>(fill[static_cast<std::size_t>(parent_[f])]++)] = f;
  }
}

DiscreteMeasure coarsen(const DiscreteMeasure& m) {
  const auto coarse = coarsen(m.shape());
  const ScaleMap map(m.shape(), coarse);
  std::vector<Mass> masses(static_cast<std::size_t>(coarse.size()), 0);
  for (std::int64_t f = 0; f < m.shape().size(); ++f) {
    masses[static_cast<std::size_t>(map.parent(f))] += m.mass(f);
  }
  return DiscreteMeasure(coarse, std::move(masses));
}

Pyramid::Pyramid(const ProblemInstance& inst, std::int64_t coarsest_max_extent) {
  if (coarsest_max_extent < 1) throw InvalidArgument("coarsest extent must be positive");
  levels_.push_back(inst);
  while (std::max(levels_.back().mu().shape().max_extent(),
                  levels_.back().nu().shape().max_extent()) > coarsest_max_extent) {
    const auto& fine = levels_.back();
    auto mu = coarsen(fine.mu());
    auto nu = coarsen(fine.nu());
    source_maps_.emplace_back(fine.mu().shape(), mu.shape());
    target_maps_.emplace_back(fine.nu().shape(), nu.shape());
    levels_.emplace_back(std::move(mu), std::move(nu));
  }
}

namespace {

// Coordinate-wise hull of a set of coarse targets, in coarse coordinates.
struct Hull {
  std::vector<std::int32_t> lo;
  std::vector<std::int32_t> hi;
  bool empty = true;

  explicit Hull(std::size_t d) : lo(d), hi(d) {}

  void add(std::span<const std::int32_t> lo_pt, std::span<const std::int32_t> hi_pt) {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = empty ? lo_pt[i] : std::min(lo[i], lo_pt[i]);
      hi[i] = empty ? hi_pt[i] : std::max(hi[i], hi_pt[i]);
    }
    empty = false;
  }
};

}  // namespace

Neighborhood refine_neighborhood(const TransportPlan& coarse_plan, const Pyramid& pyramid,
                                 std::size_t fine_level) {
  if (fine_level + 1 >= pyramid.level_count()) {
    throw InvalidArgument("refinement needs a coarser level above the fine level");
  }
  const auto& fine = pyramid.level(fine_level);
  const auto& coarse = pyramid.level(fine_level + 1);
  const auto& cs = coarse.mu().shape();
  const auto& ct = coarse.nu().shape();
  const auto& ft = fine.nu().shape();
  if (!(coarse_plan.source_shape() == cs) || !(coarse_plan.target_shape() == ct)) {
    throw InvalidArgument("coarse plan does not live on the coarse level");
  }
  const auto d = cs.rank();

  // Per coarse source: hull of its coupled coarse targets.
  const CoordinateTable target_coords(ct);
  std::vector<Hull> own(static_cast<std::size_t>(cs.size()), Hull(d));
  for (const auto& e : coarse_plan.entries()) {
    const auto y = target_coords[e.target];
    own[static_cast<std::size_t>(e.source)].add(y, y);
  }

  const CoordinateTable source_coords(cs);
  const std::int64_t max_radius = cs.max_extent();
  std::vector<Interval> coarse_boxes(static_cast<std::size_t>(cs.size()) * d);
  std::vector<std::int64_t> offset(d);
  for (std::int64_t s = 0; s < cs.size(); ++s) {
    const auto x = source_coords[s];
    Hull hull(d);
    auto absorb = [&](std::int64_t q) {
      const auto& h = own[static_cast<std::size_t>(q)];
      if (!h.empty) hull.add(h.lo, h.hi);
    };
    absorb(s);
    for (std::size_t i = 0; i < d; ++i) {
      if (x[i] > 1) absorb(s - cs.stride(i));
      if (x[i] < cs.extent(i)) absorb(s + cs.stride(i));
    }
    // Ring search in the Chebyshev metric for coarse regions without support.
    for (std::int64_t r = 1; hull.empty && r <= max_radius; ++r) {
      std::fill(offset.begin(), offset.end(), -r);
      while (true) {
        bool on_ring = false;
        bool inside = true;
        std::int64_t q = s;
        for (std::size_t i = 0; i < d; ++i) {
          on_ring = on_ring || offset[i] == -r || offset[i] == r;
          const auto c = x[i] + offset[i];
          inside = inside && c >= 1 && c <= cs.extent(i);
          q += offset[i] * cs.stride(i);
        }
        if (on_ring && inside) absorb(q);
        std::size_t axis = d;
        while (axis-- > 0) {
          if (offset[axis] < r) {
            ++offset[axis];
            break;
          }
          offset[axis] = -r;
        }
        if (axis == static_cast<std::size_t>(-1)) break;
      }
    }
    if (hull.empty) throw InvalidArgument("coarse plan is empty");
    for (std::size_t i = 0; i < d; ++i) {
      const std::int64_t lo = 2 * (std::int64_t{hull.lo[i]} - 1) + 1;
      const std::int64_t hi = std::min<std::int64_t>(2 * std::int64_t{hull.hi[i]}, ft.extent(i));
      coarse_boxes[static_cast<std::size_t>(s) * d + i] =
          Interval{static_cast<std::int32_t>(lo), static_cast<std::int32_t>(hi)};
    }
  }

  const auto& fs = fine.mu().shape();
  const auto& map = pyramid.source_map(fine_level);
  std::vector<Interval> boxes(static_cast<std::size_t>(fs.size()) * d);
  for (std::int64_t f = 0; f < fs.size(); ++f) {
    const auto c = static_cast<std::size_t>(map.parent(f));
    std::copy_n(coarse_boxes.begin() + static_cast<std::ptrdiff_t>(c * d), d,
                boxes.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(f) * d));
  }
  return Neighborhood(fs, ft, std::move(boxes));
}

}  // namespace gridot
