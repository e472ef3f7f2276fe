#include "gridot/grid.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "gridot/errors.hpp"

namespace gridot {

std::string to_string(Int128 value) {
  if (value == 0) return "0";
  const bool negative = value < 0;
  // Work on the negative side so that the minimum value does not overflow.
  Int128 v = negative ? value : -value;
  std::string digits;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

GridShape::GridShape(std::vector<std::int64_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidArgument("grid shape needs at least one axis");
  strides_.assign(dims_.size(), 1);
  std::int64_t product = 1;
  for (std::size_t i = dims_.size(); i-- > 0;) {
    if (dims_[i] < 1) throw InvalidArgument("grid extents must be positive");
    strides_[i] = product;
    if (__builtin_mul_overflow(product, dims_[i], &product)) {
      throw OverflowError("grid point count exceeds 63 bits");
    }
  }
  size_ = product;
}

std::int64_t GridShape::max_extent() const noexcept {
  return dims_.empty() ? 0 : *std::max_element(dims_.begin(), dims_.end());
}

std::int64_t GridShape::flat_index(const GridPoint& p) const {
  if (p.rank() != rank()) throw InvalidArgument("point rank does not match grid rank");
  std::int64_t index = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const auto c = p.coords[i];
    if (c < 1 || c > dims_[i]) throw InvalidArgument("coordinate out of range");
    index += (c - 1) * strides_[i];
  }
  return index;
}

GridPoint GridShape::point_of(std::int64_t index) const {
  if (index < 0 || index >= size_) throw InvalidArgument("flat index out of range");
  GridPoint p;
  p.coords.resize(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    p.coords[i] = index / strides_[i] + 1;
    index %= strides_[i];
  }
  return p;
}

std::string GridShape::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(dims_[i]);
  }
  return out;
}

CoordinateTable::CoordinateTable(const GridShape& shape) : rank_(shape.rank()) {
  for (auto d : shape.dims()) {
    if (d > std::numeric_limits<std::int32_t>::max()) {
      throw OverflowError("grid extent exceeds 32 bits");
    }
  }
  coords_.resize(static_cast<std::size_t>(shape.size()) * rank_);
  std::vector<std::int32_t> cur(rank_, 1);
  for (std::int64_t k = 0; k < shape.size(); ++k) {
    std::copy(cur.begin(), cur.end(), coords_.begin() + static_cast<std::ptrdiff_t>(k * rank_));
    for (std::size_t i = rank_; i-- > 0;) {
      if (cur[i] < shape.extent(i)) {
        ++cur[i];
        break;
      }
      cur[i] = 1;
    }
  }
}

Cost sq_euclidean_cost(const GridPoint& x, const GridPoint& y) {
  if (x.rank() != y.rank()) throw InvalidArgument("cost between points of different rank");
  Cost c = 0;
  for (std::size_t i = 0; i < x.rank(); ++i) {
    const Cost delta = x.coords[i] - y.coords[i];
    c += delta * delta;
  }
  return c;
}

Cost max_sq_euclidean_cost(const GridShape& a, const GridShape& b) {
  if (a.rank() != b.rank()) throw InvalidArgument("grids of different rank");
  Cost c = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    const Cost delta = std::max(a.extent(i), b.extent(i)) - 1;
    c += delta * delta;
  }
  return c;
}

DiscreteMeasure::DiscreteMeasure(GridShape shape, std::vector<Mass> masses)
    : shape_(std::move(shape)), masses_(std::move(masses)) {
  if (static_cast<std::int64_t>(masses_.size()) != shape_.size()) {
    throw InvalidArgument("mass count " + std::to_string(masses_.size()) +
                          " does not match grid size " + std::to_string(shape_.size()));
  }
  for (auto m : masses_) {
    if (m < 0) throw InvalidArgument("masses must be non-negative");
    if (__builtin_add_overflow(total_, m, &total_)) {
      throw OverflowError("total mass exceeds 63 bits");
    }
  }
  if (total_ == 0) throw InvalidArgument("measure has zero total mass");
}

ProblemInstance::ProblemInstance(DiscreteMeasure mu, DiscreteMeasure nu)
    : mu_(std::move(mu)), nu_(std::move(nu)) {
  if (mu_.shape().rank() != nu_.shape().rank()) {
    throw InvalidArgument("measures live on grids of different rank");
  }
  if (mu_.total() != nu_.total()) {
    throw InvalidArgument("unbalanced instance: totals " + std::to_string(mu_.total()) +
                          " and " + std::to_string(nu_.total()));
  }
}

DiscreteMeasure increment_all(const DiscreteMeasure& m) {
  std::vector<Mass> masses(m.masses().begin(), m.masses().end());
  for (auto& v : masses) {
    if (__builtin_add_overflow(v, Mass{1}, &v)) throw OverflowError("mass overflow");
  }
  return DiscreteMeasure(m.shape(), std::move(masses));
}

DiscreteMeasure scale(const DiscreteMeasure& m, Mass factor) {
  if (factor < 1) throw InvalidArgument("scale factor must be positive");
  if (factor == 1) return m;
  Mass total = 0;
  if (__builtin_mul_overflow(m.total(), factor, &total)) {
    throw OverflowError("scaled total mass exceeds 63 bits");
  }
  std::vector<Mass> masses(m.masses().begin(), m.masses().end());
  for (auto& v : masses) v *= factor;
  return DiscreteMeasure(m.shape(), std::move(masses));
}

ProblemInstance balance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.shape().rank() != nu.shape().rank()) {
    throw InvalidArgument("measures live on grids of different rank");
  }
  const Mass g = std::gcd(mu.total(), nu.total());
  return ProblemInstance(scale(mu, nu.total() / g), scale(nu, mu.total() / g));
}

}  // namespace gridot
