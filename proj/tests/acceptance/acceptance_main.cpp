// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include <time.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gridot/bench.hpp"
#include "gridot/errors.hpp"
#include "gridot/io.hpp"
#include "gridot/oracle.hpp"
#include "gridot/shielding.hpp"
#include "gridot/solver.hpp"
#include "support/dataset.hpp"
#include "support/instances.hpp"

namespace {

using namespace gridot;
namespace fs = std::filesystem;

// Pinned thresholds.
constexpr int kOracleInstances = 200;
constexpr std::int64_t kOracleMaxExtent = 16;
constexpr int kCertificateInstances = 50;
constexpr std::int64_t kCertificateMaxExtent = 32;
constexpr int kLargeInstances = 10;
constexpr std::int64_t kLargeExtent = 64;
constexpr double kSparsityFactor = 16.0;   // final |N| <= 16 |X|
constexpr double kSpeedupRatio = 0.2;      // median multiscale <= 0.2 median dense
constexpr int kBenchImages = 10;
constexpr std::int64_t kBenchReps = 10;
constexpr std::uint64_t kSeed = 20240601;

double thread_cpu_ms() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Watches every arc replacement and every converged sparse solve.
struct Auditor : SolveObserver {
  std::int64_t replacements = 0;
  std::int64_t replacement_violations = 0;
  std::int64_t converged = 0;
  std::int64_t basis_failures = 0;
  std::int64_t shielding_failures = 0;
  bool certify = false;  // brute-force shielding check on convergence

  FlowSnapshot before;
  Int128 objective = 0;

  void before_replace(const NetworkSimplex& ns) override {
    before = ns.flow_snapshot();
    objective = ns.objective();
  }
  void after_replace(const NetworkSimplex& ns, const ReplaceStats&) override {
    ++replacements;
    if (ns.flow_snapshot() != before || ns.objective() != objective) ++replacement_violations;
  }
  void on_converged(const NetworkSimplex& ns, const Neighborhood& n) override {
    ++converged;
    if (!certify) return;
    if (!ns.assert_optimal_basis()) ++basis_failures;
    if (!verify_shielding(n, ns.current_plan())) ++shielding_failures;
  }
};

struct PlanChecks {
  std::int64_t plans = 0;
  std::int64_t failures = 0;

  void check(const Solution& s, const ProblemInstance& inst) {
    ++plans;
    if (!check_marginals(s.plan, inst) || plan_cost(s.plan) != s.cost) ++failures;
  }
};

struct Fingerprint {
  TransportPlan plan;
  Potentials potentials;
  SolveStats stats;
  Int128 cost = 0;
  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct OracleSuite {
  std::int64_t mismatches = 0;
  std::int64_t infeasible = 0;
  std::vector<Fingerprint> prints;
};

OracleSuite run_oracle_suite(Auditor& auditor, PlanChecks& plans) {
  OracleSuite out;
  std::mt19937_64 rng(kSeed);
  SolveOptions opts;
  opts.observer = &auditor;
  for (int k = 0; k < kOracleInstances; ++k) {
    const auto inst = testing::random_instance(rng, kOracleMaxExtent, 0, 20);
    try {
      const auto ms = solve_multiscale(inst, opts);
      const auto dn = solve_dense(inst, opts);
      const auto oc = oracle_solve(inst).cost;
      if (ms.cost != dn.cost || dn.cost != oc) ++out.mismatches;
      plans.check(ms, inst);
      plans.check(dn, inst);
      out.prints.push_back({ms.plan, ms.potentials, ms.stats, ms.cost});
    } catch (const InfeasibleRestriction&) {
      ++out.infeasible;
    }
  }
  return out;
}

struct Report {
  int failed = 0;
  void line(int id, const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failed;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << " " << name << ": " << detail
              << std::endl;
  }
};

std::string fmt(double v, int prec = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << v;
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

int main() {
  Report report;

  // 1, 3, 4 (part) and the first half of 8.
  Auditor auditor;
  PlanChecks plans;
  const auto first = run_oracle_suite(auditor, plans);
  report.line(1, "oracle equivalence", first.mismatches == 0 && first.infeasible == 0,
              std::to_string(kOracleInstances) + " instances, " + std::to_string(first.mismatches) +
                  " mismatches");

  // 2: certificate on up to 32x32.
  {
    std::mt19937_64 rng(kSeed + 1);
    auditor.certify = true;
    const auto converged_before = auditor.converged;
    SolveOptions opts;
    opts.observer = &auditor;
    std::int64_t infeasible = 0;
    for (int k = 0; k < kCertificateInstances; ++k) {
      const auto inst = testing::random_instance(rng, kCertificateMaxExtent, 0, 20);
      try {
        plans.check(solve_multiscale(inst, opts), inst);
      } catch (const InfeasibleRestriction&) {
        ++infeasible;
      }
    }
    auditor.certify = false;
    const auto certified = auditor.converged - converged_before;
    const bool ok = auditor.basis_failures == 0 && auditor.shielding_failures == 0 &&
                    infeasible == 0 && certified > 0;
    report.line(2, "shielding fixed-point certificate", ok,
                std::to_string(certified) + " converged solves checked, " +
                    std::to_string(auditor.basis_failures) + " basis / " +
                    std::to_string(auditor.shielding_failures) + " shielding failures");
    if (infeasible > 0) std::cout << "      " << infeasible << " infeasible restrictions\n";
  }

  report.line(3, "marginal and objective exactness", plans.failures == 0,
              std::to_string(plans.plans) + " plans, " + std::to_string(plans.failures) + " failures");

  report.line(4, "warm-start conservation",
              auditor.replacement_violations == 0 && first.infeasible == 0 && auditor.replacements > 0,
              std::to_string(auditor.replacements) + " replacements, " +
                  std::to_string(auditor.replacement_violations) + " changed the flow or objective");

  // 5 and 6 on 64x64.
  {
    std::mt19937_64 rng(kSeed + 2);
    double worst = 0.0;
    for (int k = 0; k < kLargeInstances; ++k) {
      const auto inst = testing::random_square_instance(rng, kLargeExtent, 1, 20);
      const auto sol = solve_multiscale(inst);
      worst = std::max(worst, static_cast<double>(sol.final_neighborhood_size) /
                                  static_cast<double>(inst.mu().shape().size()));
    }
    report.line(5, "sparsity", worst <= kSparsityFactor,
                "max final |N| / |X| = " + fmt(worst) + " (limit " + fmt(kSparsityFactor, 0) + ")");
  }
  {
    std::mt19937_64 rng(kSeed + 3);
    std::vector<double> ms_times, dense_times;
    std::int64_t mismatches = 0;
    for (int k = 0; k < kLargeInstances; ++k) {
      const auto inst = testing::random_square_instance(rng, kLargeExtent, 0, 20);
      const double t0 = thread_cpu_ms();
      const auto ms = solve_multiscale(inst);
      const double t1 = thread_cpu_ms();
      const auto dn = solve_dense(inst);
      const double t2 = thread_cpu_ms();
      ms_times.push_back(t1 - t0);
      dense_times.push_back(t2 - t1);
      if (ms.cost != dn.cost) ++mismatches;
    }
    const double ratio = median(ms_times) / median(dense_times);
    report.line(6, "internal speedup", ratio <= kSpeedupRatio && mismatches == 0,
                "median " + fmt(median(ms_times), 1) + " ms vs " + fmt(median(dense_times), 1) +
                    " ms dense, ratio " + fmt(ratio, 3) + " (limit " + fmt(kSpeedupRatio, 1) + ")");
  }

  // 7: bench protocol on a synthetic white-noise directory.
  {
    const auto root = fs::temp_directory_path() / "gridot_acceptance_bench";
    fs::remove_all(root);
    const std::vector<std::int64_t> dims{32, 64};
    for (const auto d : dims) {
      testing::write_noise_images(root, "WhiteNoise", d, kBenchImages, kSeed + 10 + d);
    }
    std::vector<std::string> problems;
    try {
      BenchConfig cfg;
      cfg.dataset_dir = root;
      cfg.dims = dims;
      cfg.repetitions = kBenchReps;
      cfg.output_path = root / "results.csv";
      run_bench(cfg);

      const auto rows = read_csv(cfg.output_path);
      const std::size_t cols = 4 + kBenchReps + 6;
      std::map<std::string, int> per_block;
      std::map<std::string, int> summaries;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != cols) {
          problems.push_back("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                             " columns");
          continue;
        }
        const auto key = row[0] + "/" + row[1];
        if (row.back() == "summary") {
          ++summaries[key];
        } else if (row.back() == "ok") {
          ++per_block[key];
        } else {
          problems.push_back("pair " + row[2] + " " + row[3] + ": " + row.back());
        }
      }
      for (const auto d : dims) {
        const auto key = "WhiteNoise/" + std::to_string(d);
        if (per_block[key] != 45) {
          problems.push_back(key + " has " + std::to_string(per_block[key]) + " records");
        }
        if (summaries[key] != 1) problems.push_back(key + " lacks its summary row");
      }
      // run_bench rejects a pair whose cost changes across repetitions; an ok status
      // therefore certifies repetition invariance. Recheck two pairs directly.
      for (const auto d : dims) {
        const auto files = dataset_files(root, "WhiteNoise", d);
        const auto inst = balance(load_bench_measure(files[0], IncrementMode::kAllowZeros),
                                  load_bench_measure(files[1], IncrementMode::kAllowZeros));
        const auto c0 = solve_multiscale(inst).cost;
        if (solve_multiscale(inst).cost != c0) problems.push_back("cost varies on rerun");
        for (std::size_t r = 1; r < rows.size(); ++r) {
          if (rows[r].size() == cols && rows[r][1] == std::to_string(d) &&
              rows[r][2] == files[0].stem().string() && rows[r][3] == files[1].stem().string() &&
              rows[r][4 + kBenchReps + 1] != to_string(c0)) {
            problems.push_back("bench cost differs from a direct solve");
          }
        }
      }
      // --increment-all: every mass of every input goes up by exactly one.
      for (const auto d : dims) {
        for (const auto& f : dataset_files(root, "WhiteNoise", d)) {
          const auto raw = load_csv_grid(f);
          const auto inc = load_bench_measure(f, IncrementMode::kIncrementAll);
          for (std::int64_t i = 0; i < inc.shape().size(); ++i) {
            if (inc.mass(i) != raw.masses[static_cast<std::size_t>(i)] + 1) {
              problems.push_back("increment-all mismatch in " + f.filename().string());
              break;
            }
          }
        }
      }
      BenchConfig inc = cfg;
      inc.dims = {32};
      inc.repetitions = 1;
      inc.increment_mode = IncrementMode::kIncrementAll;
      inc.output_path.clear();
      const auto recs = run_bench(inc);
      const auto files = dataset_files(root, "WhiteNoise", 32);
      const auto expected =
          solve_dense(balance(increment_all(load_csv_measure(files[0])),
                              increment_all(load_csv_measure(files[1]))))
              .cost;
      if (recs.empty() || !recs[0].ok() || recs[0].cost != expected) {
        problems.push_back("increment-all bench cost differs from incremented solve");
      }
    } catch (const std::exception& e) {
      problems.push_back(e.what());
    }
    fs::remove_all(root);
    report.line(7, "protocol fidelity", problems.empty(),
                problems.empty() ? "45 records per category/dim, summaries present, costs stable, "
                                   "increment-all verified"
                                 : problems.front());
  }

  // 8: rerun criterion 1 and compare.
  {
    Auditor a2;
    PlanChecks p2;
    const auto second = run_oracle_suite(a2, p2);
    const bool same = second.prints == first.prints && second.mismatches == first.mismatches;
    report.line(8, "determinism", same && !first.prints.empty(),
                std::to_string(first.prints.size()) + " plans, potentials, pivot counts and costs " +
                    (same ? "identical" : "differ"));
  }

  std::cout << (report.failed == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return report.failed == 0 ? 0 : 1;
}
