// gridot: exact optimal transport between two CSV images.
//
//   gridot solve  --mu a.csv --nu b.csv [--multiscale|--dense] [--increment-all]
//                 [--emit-plan plan.txt] [--emit-stats stats.json]
//   gridot bench  --data DIR [--dims 32,64,128] [--reps 10] --out results.csv
//   gridot verify --mu a.csv --nu b.csv
//
// Exit codes: 0 success, 1 usage, 2 I/O or parse error, 3 solver error,
// 4 verification disagreement.

#include <time.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridot/bench.hpp"
#include "gridot/errors.hpp"
#include "gridot/io.hpp"
#include "gridot/oracle.hpp"
#include "gridot/solver.hpp"
#include "json.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kSolver = 3, kDisagree = 4 };

// Errors raised while reading inputs map to kIo, the rest to kSolver.
struct InputFailure {
  std::string message;
};

gridot::ProblemInstance load_instance(const std::string& mu_path, const std::string& nu_path,
                                      gridot::IncrementMode mode) {
  try {
    const auto mu = gridot::load_csv_measure(mu_path, mode);
    const auto nu = gridot::load_csv_measure(nu_path, mode);
    return gridot::balance(mu, nu);
  } catch (const gridot::Error& e) {
    throw InputFailure{e.what()};
  }
}

double process_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

std::vector<std::int64_t> parse_dims(const std::string& text) {
  std::vector<std::int64_t> dims;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) dims.push_back(std::stoll(item));
  }
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact optimal transport on grids with squared Euclidean cost"};
  app.require_subcommand(1);

  std::string mu_path, nu_path, plan_path, stats_path;
  bool dense = false;
  bool multiscale = false;
  bool increment = false;

  auto* solve = app.add_subcommand("solve", "Solve one instance and print the optimal cost");
  solve->add_option("--mu", mu_path, "Source measure (CSV)")->required();
  solve->add_option("--nu", nu_path, "Target measure (CSV)")->required();
  auto* ms_flag = solve->add_flag("--multiscale", multiscale, "Multi-scale solver (default)");
  solve->add_flag("--dense", dense, "Solve on the full product X x Y")->excludes(ms_flag);
  solve->add_flag("--increment-all", increment, "Add one to every mass before solving");
  solve->add_option("--emit-plan", plan_path, "Write the optimal plan here");
  solve->add_option("--emit-stats", stats_path, "Write solver statistics (JSON) here");

  std::string data_dir, dims_text = "32,64,128", out_path;
  std::vector<std::string> categories;
  std::int64_t reps = 10;
  std::int64_t threads = 0;
  bool bench_increment = false;
  auto* bench = app.add_subcommand("bench", "Pairwise benchmark over a DOTmark-style directory");
  bench->add_option("--data", data_dir, "Dataset root: <root>/<Category>/data<dim>_<id>.csv")
      ->required();
  bench->add_option("--dims", dims_text, "Comma-separated grid extents")->capture_default_str();
  bench->add_option("--reps", reps, "Repetitions per pair")->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "Results CSV")->required();
  bench->add_option("--categories", categories, "Restrict to these categories");
  bench->add_option("--threads", threads, "Worker threads (default: GRIDOT_THREADS or all cores)");
  bench->add_flag("--increment-all", bench_increment, "Add one to every mass before solving");

  std::string vmu, vnu;
  auto* verify = app.add_subcommand("verify", "Cross-check multi-scale, dense and oracle costs");
  verify->add_option("--mu", vmu, "Source measure (CSV)")->required();
  verify->add_option("--nu", vnu, "Target measure (CSV)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) {
      const auto mode = increment ? gridot::IncrementMode::kIncrementAll
                                  : gridot::IncrementMode::kAllowZeros;
      const auto inst = load_instance(mu_path, nu_path, mode);
      const double t0 = process_cpu_ms();
      const auto sol = dense ? gridot::solve_dense(inst) : gridot::solve_multiscale(inst);
      const double t1 = process_cpu_ms();
      std::cout << gridot::to_string(sol.cost) << '\n';
      try {
        if (!plan_path.empty()) gridot::write_plan(plan_path, sol.plan);
        if (!stats_path.empty()) {
          nlohmann::json j = {
              {"mode", dense ? "dense" : "multiscale"},
              {"cost", gridot::to_string(sol.cost)},
              {"pivots", sol.stats.pivots},
              {"entering_scans", sol.stats.entering_scans},
              {"arc_replacements", sol.stats.arc_replacements},
              {"outer_iterations", sol.stats.outer_iterations},
              {"final_neighborhood_size", sol.final_neighborhood_size},
              {"plan_entries", sol.plan.size()},
              {"cpu_ms", t1 - t0},
          };
          std::ofstream out(stats_path);
          if (!out) throw gridot::IoError("cannot write " + stats_path);
          out << j.dump(2) << '\n';
        }
      } catch (const gridot::Error& e) {
        throw InputFailure{e.what()};
      }
      return kOk;
    }

    if (*bench) {
      gridot::BenchConfig cfg;
      cfg.dataset_dir = data_dir;
      cfg.categories = categories;
      cfg.dims = parse_dims(dims_text);
      cfg.repetitions = reps;
      cfg.increment_mode = bench_increment ? gridot::IncrementMode::kIncrementAll
                                           : gridot::IncrementMode::kAllowZeros;
      cfg.output_path = out_path;
      cfg.threads = threads;
      std::vector<gridot::BenchRecord> records;
      try {
        records = gridot::run_bench(cfg);
      } catch (const gridot::IoError& e) {
        throw InputFailure{e.what()};
      } catch (const gridot::ParseError& e) {
        throw InputFailure{e.what()};
      }
      std::int64_t failed = 0;
      for (const auto& r : records) {
        if (r.summary) {
          std::cout << r.category << " " << r.dim << ": mean " << r.mean_ms << " ms\n";
        } else if (!r.ok()) {
          ++failed;
          std::cerr << "failed: " << r.category << " " << r.a << " " << r.b << ": " << r.error
                    << '\n';
        }
      }
      return failed == 0 ? kOk : kSolver;
    }

    if (*verify) {
      const auto inst = load_instance(vmu, vnu, gridot::IncrementMode::kAllowZeros);
      const auto ms = gridot::solve_multiscale(inst);
      const auto dn = gridot::solve_dense(inst);
      std::optional<gridot::Int128> oracle;
      const auto pairs = static_cast<gridot::Int128>(inst.mu().shape().size()) *
                         inst.nu().shape().size();
      if (pairs <= gridot::kOraclePairBudget) oracle = gridot::oracle_solve(inst).cost;
      std::cout << "multiscale " << gridot::to_string(ms.cost) << '\n';
      std::cout << "dense      " << gridot::to_string(dn.cost) << '\n';
      std::cout << "oracle     " << (oracle ? gridot::to_string(*oracle) : "skipped") << '\n';
      const bool agree = ms.cost == dn.cost && (!oracle || *oracle == ms.cost);
      std::cout << (agree ? "AGREE" : "DISAGREE") << '\n';
      return agree ? kOk : kDisagree;
    }
  } catch (const InputFailure& f) {
    std::cerr << "gridot: " << f.message << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "gridot: " << e.what() << '\n';
    return kSolver;
  }
  return kUsage;
}
