#pragma once

// Text formats: integer CSV images and the plan file.
//
// Measure CSV: R lines of C comma-separated non-negative integers, read as an
// R x C grid (row = first coordinate).
//
// Plan file:
//   # gridot-plan v1
//   # source 4x4 target 4x4
//   <source flat index>,<target flat index>,<mass>
//   ...

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gridot/grid.hpp"
#include "gridot/sparsity.hpp"

namespace gridot {

enum class IncrementMode { kAllowZeros, kIncrementAll };

struct MassGrid {
  GridShape shape;
  std::vector<Mass> masses;
};

MassGrid parse_csv_grid(std::istream& in);
MassGrid load_csv_grid(const std::filesystem::path& path);

// Zero totals are rejected with InvalidArgument after the increment is applied.
DiscreteMeasure load_csv_measure(const std::filesystem::path& path,
                                 IncrementMode mode = IncrementMode::kAllowZeros);

void write_csv_measure(std::ostream& out, const DiscreteMeasure& m);
void write_csv_measure(const std::filesystem::path& path, const DiscreteMeasure& m);

void write_plan(std::ostream& out, const TransportPlan& plan);
void write_plan(const std::filesystem::path& path, const TransportPlan& plan);
TransportPlan read_plan(std::istream& in);
TransportPlan read_plan(const std::filesystem::path& path);

GridShape parse_shape(const std::string& text);

}  // namespace gridot
