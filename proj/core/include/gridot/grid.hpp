#pragma once

// Grid geometry, integer measures and the squared Euclidean cost.
//
// Coordinates are 1-based: a grid with extents (n_1, ..., n_d) holds the
// points [1, n_1] x ... x [1, n_d]. Flat indices are 0-based and row-major
// (the last axis varies fastest).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gridot {

using Mass = std::int64_t;
using Cost = std::int64_t;
using Int128 = __int128;

std::string to_string(Int128 value);

struct GridPoint {
  std::vector<std::int64_t> coords;

  std::size_t rank() const noexcept { return coords.size(); }
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<std::int64_t> dims);

  std::size_t rank() const noexcept { return dims_.size(); }
  std::span<const std::int64_t> dims() const noexcept { return dims_; }
  std::int64_t extent(std::size_t axis) const { return dims_.at(axis); }
  std::int64_t size() const noexcept { return size_; }
  std::int64_t max_extent() const noexcept;

  // Distance in flat indices between neighbours along `axis`.
  std::int64_t stride(std::size_t axis) const { return strides_.at(axis); }

  std::int64_t flat_index(const GridPoint& p) const;
  GridPoint point_of(std::int64_t index) const;

  // "32x32"
  std::string to_string() const;

  friend bool operator==(const GridShape& a, const GridShape& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<std::int64_t> dims_;
  std::vector<std::int64_t> strides_;
  std::int64_t size_ = 0;
};

// Precomputed 1-based coordinates of every point of a shape, stored flat.
class CoordinateTable {
 public:
  CoordinateTable() = default;
  explicit CoordinateTable(const GridShape& shape);

  std::size_t rank() const noexcept { return rank_; }
  std::span<const std::int32_t> operator[](std::int64_t index) const {
    return {coords_.data() + static_cast<std::size_t>(index) * rank_, rank_};
  }

 private:
  std::size_t rank_ = 0;
  std::vector<std::int32_t> coords_;
};

// Squared Euclidean distance between two points of equal rank.
Cost sq_euclidean_cost(const GridPoint& x, const GridPoint& y);

inline Cost sq_euclidean_cost(std::span<const std::int32_t> x,
                              std::span<const std::int32_t> y) noexcept {
  Cost c = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Cost delta = static_cast<Cost>(x[i]) - y[i];
    c += delta * delta;
  }
  return c;
}

// Largest squared distance between any point of `a` and any point of `b`.
Cost max_sq_euclidean_cost(const GridShape& a, const GridShape& b);

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(GridShape shape, std::vector<Mass> masses);

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const Mass> masses() const noexcept { return masses_; }
  Mass mass(std::int64_t index) const { return masses_.at(static_cast<std::size_t>(index)); }
  Mass total() const noexcept { return total_; }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.shape_ == b.shape_ && a.masses_ == b.masses_;
  }

 private:
  GridShape shape_;
  std::vector<Mass> masses_;
  Mass total_ = 0;
};

// A balanced pair of measures of equal rank.
class ProblemInstance {
 public:
  ProblemInstance() = default;
  ProblemInstance(DiscreteMeasure mu, DiscreteMeasure nu);

  const DiscreteMeasure& mu() const noexcept { return mu_; }
  const DiscreteMeasure& nu() const noexcept { return nu_; }
  Mass total() const noexcept { return mu_.total(); }

 private:
  DiscreteMeasure mu_;
  DiscreteMeasure nu_;
};

// Adds one unit of mass to every grid point.
DiscreteMeasure increment_all(const DiscreteMeasure& m);

// Scales both measures to the common total lcm(total(mu), total(nu)).
ProblemInstance balance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

DiscreteMeasure scale(const DiscreteMeasure& m, Mass factor);

}  // namespace gridot
