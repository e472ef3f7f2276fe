#include "gridot/bench.hpp"

#include <time.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "gridot/errors.hpp"
#include "gridot/solver.hpp"

namespace gridot {

namespace fs = std::filesystem;

namespace {

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

struct Job {
  std::string category;
  std::int64_t dim;
  FilePair files;
};

BenchRecord run_pair(const Job& job, const BenchConfig& cfg) {
  BenchRecord rec;
  rec.category = job.category;
  rec.dim = job.dim;
  rec.a = job.files.first.stem().string();
  rec.b = job.files.second.stem().string();
  try {
    const auto mu = load_bench_measure(job.files.first, cfg.increment_mode);
    const auto nu = load_bench_measure(job.files.second, cfg.increment_mode);
    const auto inst = balance(mu, nu);
    std::vector<double> wall;
    for (std::int64_t r = 0; r < cfg.repetitions; ++r) {
      const auto w0 = std::chrono::steady_clock::now();
      const double c0 = thread_cpu_ms();
      const auto sol = solve_multiscale(inst);
      const double c1 = thread_cpu_ms();
      const auto w1 = std::chrono::steady_clock::now();
      rec.rep_ms.push_back(c1 - c0);
      wall.push_back(std::chrono::duration<double, std::milli>(w1 - w0).count());
      if (r == 0) {
        rec.cost = sol.cost;
        rec.final_neighborhood = sol.final_neighborhood_size;
        rec.pivots = sol.stats.pivots;
      } else if (sol.cost != rec.cost) {
        throw Error("cost differs between repetitions");
      }
    }
    rec.mean_ms = mean(rec.rep_ms);
    rec.mean_wall_ms = mean(wall);
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.rep_ms.clear();
  }
  return rec;
}

}  // namespace

std::vector<FilePair> enumerate_pairs(const std::vector<fs::path>& files) {
  if (files.size() < 2) throw InvalidArgument("pairing needs at least two datasets");
  std::vector<FilePair> pairs;
  pairs.reserve(files.size() * (files.size() - 1) / 2);
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (std::size_t j = i + 1; j < files.size(); ++j) pairs.emplace_back(files[i], files[j]);
  }
  return pairs;
}

std::vector<fs::path> dataset_files(const fs::path& dir, const std::string& category,
                                    std::int64_t dim) {
  const auto folder = dir / category;
  if (!fs::is_directory(folder)) throw IoError("missing category directory " + folder.string());
  const std::string prefix = "data" + std::to_string(dim) + "_";
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(folder)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

DiscreteMeasure load_bench_measure(const fs::path& path, IncrementMode mode) {
  return load_csv_measure(path, mode);
}

std::int64_t worker_count(std::int64_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GRIDOT_THREADS")) {
    const auto v = std::atoll(env);
    if (v > 0) return v;
  }
  return std::max<std::int64_t>(1, std::thread::hardware_concurrency());
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  if (cfg.repetitions < 1) throw InvalidArgument("repetitions must be at least 1");
  auto categories = cfg.categories;
  if (categories.empty()) {
    if (!fs::is_directory(cfg.dataset_dir)) {
      throw IoError("missing dataset directory " + cfg.dataset_dir.string());
    }
    for (const auto& entry : fs::directory_iterator(cfg.dataset_dir)) {
      if (entry.is_directory()) categories.push_back(entry.path().filename().string());
    }
    std::sort(categories.begin(), categories.end());
  }

  // Blocks of jobs, one per category/dim, in deterministic order.
  std::vector<Job> jobs;
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (const auto& category : categories) {
    for (const auto dim : cfg.dims) {
      const auto files = dataset_files(cfg.dataset_dir, category, dim);
      if (files.size() < 2) {
        throw IoError("category " + category + " has fewer than two files of dim " +
                      std::to_string(dim));
      }
      const auto begin = jobs.size();
      for (auto& p : enumerate_pairs(files)) jobs.push_back({category, dim, std::move(p)});
      blocks.emplace_back(begin, jobs.size());
    }
  }

  std::vector<BenchRecord> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) results[k] = run_pair(jobs[k], cfg);
  };
  const auto n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count(cfg.threads)), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<BenchRecord> records;
  for (const auto& [begin, end] : blocks) {
    std::vector<double> means;
    for (auto k = begin; k < end; ++k) {
      if (results[k].ok()) means.push_back(results[k].mean_ms);
      records.push_back(std::move(results[k]));
    }
    BenchRecord summary;
    summary.category = jobs[begin].category;
    summary.dim = jobs[begin].dim;
    summary.a = summary.b = "*";
    summary.summary = true;
    summary.mean_ms = mean(means);
    records.push_back(std::move(summary));
  }

  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw IoError("cannot write " + cfg.output_path.string());
    write_bench_csv(out, records, cfg.repetitions);
    if (!out) throw IoError("write failure on " + cfg.output_path.string());
  }
  return records;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records,
                     std::int64_t repetitions) {
  out << "category,dim,a,b";
  for (std::int64_t r = 1; r <= repetitions; ++r) out << ",rep_ms_" << r;
  out << ",mean_ms,cost,final_nbhd,pivots,mean_wall_ms,status\n";
  auto fixed = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
  };
  for (const auto& rec : records) {
    out << rec.category << ',' << rec.dim << ',' << rec.a << ',' << rec.b;
    for (std::int64_t r = 0; r < repetitions; ++r) {
      out << ',';
      if (static_cast<std::size_t>(r) < rec.rep_ms.size()) out << fixed(rec.rep_ms[r]);
    }
    out << ',' << fixed(rec.mean_ms);
    if (rec.summary) {
      out << ",,,,,summary\n";
      continue;
    }
    if (!rec.ok()) {
      std::string msg = rec.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << ",,,,,error: " << msg << '\n';
      continue;
    }
    out << ',' << to_string(rec.cost) << ',' << rec.final_neighborhood << ',' << rec.pivots << ','
        << fixed(rec.mean_wall_ms) << ",ok\n";
  }
}

}  // namespace gridot
