#include "gridot/sparsity.hpp"

#include <algorithm>

#include "gridot/errors.hpp"

namespace gridot {

Neighborhood::Neighborhood(GridShape source, GridShape target, std::vector<Interval> boxes,
                           std::vector<std::pair<std::int64_t, std::int64_t>> extra_pairs)
    : source_(std::move(source)), target_(std::move(target)), boxes_(std::move(boxes)) {
  if (source_.rank() != target_.rank()) {
    throw InvalidArgument("neighborhood between grids of different rank");
  }
  const auto d = target_.rank();
  if (boxes_.size() != static_cast<std::size_t>(source_.size()) * d) {
    throw InvalidArgument("neighborhood needs one box per source point");
  }
  for (std::size_t k = 0; k < boxes_.size(); ++k) {
    const auto& iv = boxes_[k];
    if (!iv.empty() && (iv.lo < 1 || iv.hi > target_.extent(k % d))) {
      throw InvalidArgument("neighborhood box exceeds the target grid");
    }
  }
  // Canonicalise empty boxes so that equality is structural.
  for (std::int64_t s = 0; s < source_.size(); ++s) {
    auto* b = boxes_.data() + static_cast<std::size_t>(s) * d;
    if (std::any_of(b, b + d, [](const Interval& iv) { return iv.empty(); })) {
      std::fill(b, b + d, Interval{});
    }
  }

  std::sort(extra_pairs.begin(), extra_pairs.end());
  extra_pairs.erase(std::unique(extra_pairs.begin(), extra_pairs.end()), extra_pairs.end());
  extra_begin_.assign(static_cast<std::size_t>(source_.size()) + 1, 0);
  for (const auto& [s, t] : extra_pairs) {
    if (s < 0 || s >= source_.size() || t < 0 || t >= target_.size()) {
      throw InvalidArgument("neighborhood pair out of range");
    }
    if (box_contains(s, t)) continue;
    extra_targets_.push_back(t);
    ++extra_begin_[static_cast<std::size_t>(s) + 1];
  }
  for (std::size_t s = 1; s < extra_begin_.size(); ++s) extra_begin_[s] += extra_begin_[s - 1];

  size_ = static_cast<std::int64_t>(extra_targets_.size());
  for (std::int64_t s = 0; s < source_.size(); ++s) {
    if (__builtin_add_overflow(size_, box_volume(s), &size_)) {
      throw OverflowError("neighborhood pair count exceeds 63 bits");
    }
  }
}

Neighborhood Neighborhood::from_pairs(GridShape source, GridShape target,
                                      std::vector<std::pair<std::int64_t, std::int64_t>> pairs) {
  std::vector<Interval> boxes(static_cast<std::size_t>(source.size()) * target.rank());
  return Neighborhood(std::move(source), std::move(target), std::move(boxes), std::move(pairs));
}

std::int64_t Neighborhood::box_volume(std::int64_t source) const {
  std::int64_t volume = 1;
  for (const auto& iv : box(source)) {
    if (iv.empty()) return 0;
    if (__builtin_mul_overflow(volume, iv.length(), &volume)) {
      throw OverflowError("box volume exceeds 63 bits");
    }
  }
  return volume;
}

bool Neighborhood::box_contains(std::int64_t source, std::int64_t target) const {
  const auto b = box(source);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::int64_t c = target / target_.stride(i) + 1;
    target %= target_.stride(i);
    if (!b[i].contains(c)) return false;
  }
  return true;
}

bool Neighborhood::contains(std::int64_t source, std::int64_t target) const {
  if (source < 0 || source >= source_.size() || target < 0 || target >= target_.size()) {
    return false;
  }
  if (box_contains(source, target)) return true;
  const auto e = extras(source);
  return std::binary_search(e.begin(), e.end(), target);
}

TransportPlan::TransportPlan(GridShape source, GridShape target, std::vector<PlanEntry> entries)
    : source_(std::move(source)), target_(std::move(target)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const PlanEntry& a, const PlanEntry& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const auto& e = entries_[k];
    if (e.mass <= 0) throw InvalidArgument("plan masses must be strictly positive");
    if (e.source < 0 || e.source >= source_.size() || e.target < 0 || e.target >= target_.size()) {
      throw InvalidArgument("plan entry out of range");
    }
    if (k > 0 && entries_[k - 1].source == e.source && entries_[k - 1].target == e.target) {
      throw InvalidArgument("duplicate plan entry");
    }
  }
}

Int128 plan_cost(const TransportPlan& plan) {
  Int128 total = 0;
  for (const auto& e : plan.entries()) {
    const auto x = plan.source_shape().point_of(e.source);
    const auto y = plan.target_shape().point_of(e.target);
    total += static_cast<Int128>(e.mass) * sq_euclidean_cost(x, y);
  }
  return total;
}

bool check_marginals(const TransportPlan& plan, const ProblemInstance& inst) {
  if (!(plan.source_shape() == inst.mu().shape()) || !(plan.target_shape() == inst.nu().shape())) {
    return false;
  }
  std::vector<Mass> rows(static_cast<std::size_t>(inst.mu().shape().size()), 0);
  std::vector<Mass> cols(static_cast<std::size_t>(inst.nu().shape().size()), 0);
  for (const auto& e : plan.entries()) {
    auto& r = rows[static_cast<std::size_t>(e.source)];
    auto& c = cols[static_cast<std::size_t>(e.target)];
    if (__builtin_add_overflow(r, e.mass, &r) || __builtin_add_overflow(c, e.mass, &c)) {
      return false;
    }
  }
  return std::equal(rows.begin(), rows.end(), inst.mu().masses().begin()) &&
         std::equal(cols.begin(), cols.end(), inst.nu().masses().begin());
}

Neighborhood full_neighborhood(const GridShape& source, const GridShape& target) {
  if (source.rank() != target.rank()) throw InvalidArgument("grids of different rank");
  std::int64_t pairs = 0;
  if (__builtin_mul_overflow(source.size(), target.size(), &pairs)) {
    throw OverflowError("dense pair count exceeds 63 bits");
  }
  const auto d = target.rank();
  std::vector<Interval> boxes(static_cast<std::size_t>(source.size()) * d);
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    boxes[k] = Interval{1, static_cast<std::int32_t>(target.extent(k % d))};
  }
  return Neighborhood(source, target, std::move(boxes));
}

Neighborhood union_with_support(const Neighborhood& n, const TransportPlan& plan) {
  if (!(n.source_shape() == plan.source_shape()) || !(n.target_shape() == plan.target_shape())) {
    throw InvalidArgument("plan and neighborhood live on different grids");
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> extra;
  for (std::int64_t s = 0; s < n.source_count(); ++s) {
    for (auto t : n.extras(s)) extra.emplace_back(s, t);
  }
  for (const auto& e : plan.entries()) {
    if (!n.contains(e.source, e.target)) extra.emplace_back(e.source, e.target);
  }
  const auto d = n.target_shape().rank();
  std::vector<Interval> boxes;
  boxes.reserve(static_cast<std::size_t>(n.source_count()) * d);
  for (std::int64_t s = 0; s < n.source_count(); ++s) {
    const auto b = n.box(s);
    boxes.insert(boxes.end(), b.begin(), b.end());
  }
  return Neighborhood(n.source_shape(), n.target_shape(), std::move(boxes), std::move(extra));
}

}  // namespace gridot
