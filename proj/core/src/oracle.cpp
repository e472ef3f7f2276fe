#include "gridot/oracle.hpp"

#include <algorithm>
#include <limits>

#include "gridot/errors.hpp"

namespace gridot {

OracleResult oracle_solve(const ProblemInstance& inst) {
  const auto& src = inst.mu().shape();
  const auto& tgt = inst.nu().shape();
  const std::int64_t n = src.size();
  const std::int64_t m = tgt.size();
  if (n > kOraclePairBudget || m > kOraclePairBudget || n * m > kOraclePairBudget) {
    throw BudgetExceeded("oracle limited to " + std::to_string(kOraclePairBudget) + " pairs");
  }
  const auto N = static_cast<std::size_t>(n);
  const auto M = static_cast<std::size_t>(m);

  std::vector<Cost> cost(N * M);
  for (std::int64_t s = 0; s < n; ++s) {
    const auto x = src.point_of(s);
    for (std::int64_t t = 0; t < m; ++t) {
      cost[static_cast<std::size_t>(s) * M + static_cast<std::size_t>(t)] =
          sq_euclidean_cost(x, tgt.point_of(t));
    }
  }

  std::vector<Mass> excess(inst.mu().masses().begin(), inst.mu().masses().end());
  std::vector<Mass> deficit(inst.nu().masses().begin(), inst.nu().masses().end());
  std::vector<Mass> flow(N * M, 0);

  // Node ids: sources [0, n), targets [n, n + m).
  const std::size_t V = N + M;
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  std::vector<Cost> pot(V, 0);
  std::vector<Cost> dist(V);
  std::vector<std::int64_t> prev(V);
  std::vector<char> done(V);

  Mass remaining = inst.total();
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t s = 0; s < N; ++s) {
      if (excess[s] > 0) dist[s] = 0;
    }

    // Dense Dijkstra on reduced costs; stop at the first target with deficit.
    std::int64_t sink = -1;
    while (true) {
      std::size_t u = V;
      for (std::size_t v = 0; v < V; ++v) {
        if (!done[v] && dist[v] < kInf && (u == V || dist[v] < dist[u])) u = v;
      }
      if (u == V) break;
      done[u] = 1;
      if (u >= N) {
        const auto t = u - N;
        if (deficit[t] > 0) {
          sink = static_cast<std::int64_t>(u);
          break;
        }
        // Residual backward arcs t -> s exist where flow is positive.
        for (std::size_t s = 0; s < N; ++s) {
          if (flow[s * M + t] == 0 || done[s]) continue;
          const Cost nd = dist[u] - cost[s * M + t] + pot[u] - pot[s];
          if (nd < dist[s]) {
            dist[s] = nd;
            prev[s] = static_cast<std::int64_t>(u);
          }
        }
      } else {
        for (std::size_t t = 0; t < M; ++t) {
          const auto v = N + t;
          if (done[v]) continue;
          const Cost nd = dist[u] + cost[u * M + t] + pot[u] - pot[v];
          if (nd < dist[v]) {
            dist[v] = nd;
            prev[v] = static_cast<std::int64_t>(u);
          }
        }
      }
    }
    if (sink < 0) throw Error("oracle: no augmenting path in a balanced instance");

    // Bottleneck along the path.
    Mass amount = deficit[static_cast<std::size_t>(sink) - N];
    auto v = static_cast<std::size_t>(sink);
    while (prev[v] >= 0) {
      const auto u = static_cast<std::size_t>(prev[v]);
      if (u >= N) amount = std::min(amount, flow[v * M + (u - N)]);  // backward t -> s
      v = u;
    }
    amount = std::min(amount, excess[v]);

    v = static_cast<std::size_t>(sink);
    while (prev[v] >= 0) {
      const auto u = static_cast<std::size_t>(prev[v]);
      if (u < N) {
        flow[u * M + (v - N)] += amount;
      } else {
        flow[v * M + (u - N)] -= amount;
      }
      v = u;
    }
    excess[v] -= amount;
    deficit[static_cast<std::size_t>(sink) - N] -= amount;
    remaining -= amount;

    const Cost reach = dist[static_cast<std::size_t>(sink)];
    for (std::size_t w = 0; w < V; ++w) pot[w] += std::min(dist[w], reach);
  }

  OracleResult result;
  std::vector<PlanEntry> entries;
  for (std::size_t s = 0; s < N; ++s) {
    for (std::size_t t = 0; t < M; ++t) {
      const Mass f = flow[s * M + t];
      if (f == 0) continue;
      entries.push_back({static_cast<std::int64_t>(s), static_cast<std::int64_t>(t), f});
      result.cost += static_cast<Int128>(f) * cost[s * M + t];
    }
  }
  result.plan = TransportPlan(src, tgt, std::move(entries));
  return result;
}

}  // namespace gridot
