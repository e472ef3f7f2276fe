#pragma once

// Pairwise benchmark sweep over a DOTmark-style directory:
//
//   <dataset_dir>/<Category>/data<dim>_<id>.csv
//
// Every unordered pair of distinct files of one category and dim is solved
// `repetitions` times with solve_multiscale; each run's thread CPU time is
// recorded and averaged.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gridot/grid.hpp"
#include "gridot/io.hpp"

namespace gridot {

struct BenchConfig {
  std::filesystem::path dataset_dir;
  std::vector<std::string> categories;  // empty: every subdirectory
  std::vector<std::int64_t> dims{32, 64, 128};
  std::int64_t repetitions = 10;
  IncrementMode increment_mode = IncrementMode::kAllowZeros;
  std::filesystem::path output_path;  // empty: do not write
  std::int64_t threads = 0;           // 0: GRIDOT_THREADS, else hardware concurrency
};

struct BenchRecord {
  std::string category;
  std::int64_t dim = 0;
  std::string a;
  std::string b;
  std::vector<double> rep_ms;  // CPU time per repetition
  double mean_ms = 0.0;
  double mean_wall_ms = 0.0;
  Int128 cost = 0;
  std::int64_t final_neighborhood = 0;
  std::int64_t pivots = 0;
  bool summary = false;  // per category/dim mean of means
  std::string error;     // non-empty when the pair failed

  bool ok() const noexcept { return error.empty(); }
};

using FilePair = std::pair<std::filesystem::path, std::filesystem::path>;

// All C(n, 2) unordered pairs of distinct files, lexicographic by position.
std::vector<FilePair> enumerate_pairs(const std::vector<std::filesystem::path>& files);

// data<dim>_*.csv inside <dir>/<category>, sorted by name.
std::vector<std::filesystem::path> dataset_files(const std::filesystem::path& dir,
                                                 const std::string& category, std::int64_t dim);

// Measure as fed to the solver for one benchmark input.
DiscreteMeasure load_bench_measure(const std::filesystem::path& path, IncrementMode mode);

std::int64_t worker_count(std::int64_t requested = 0);

std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

// Header: category,dim,a,b,rep_ms_1..rep_ms_R,mean_ms,cost,final_nbhd,pivots,mean_wall_ms,status
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records,
                     std::int64_t repetitions);

}  // namespace gridot
