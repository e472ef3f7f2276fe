#include "gridot/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gridot/errors.hpp"

namespace gridot {

namespace {

constexpr Mass kInfiniteFlow = std::numeric_limits<Mass>::max();
constexpr std::int64_t kMaxIndex = std::numeric_limits<std::int32_t>::max();

}  // namespace

NetworkSimplex::NetworkSimplex(const ProblemInstance& inst, const Neighborhood& arcs)
    : source_shape_(inst.mu().shape()), target_shape_(inst.nu().shape()) {
  if (!(arcs.source_shape() == source_shape_) || !(arcs.target_shape() == target_shape_)) {
    throw InvalidArgument("neighborhood does not match the instance grids");
  }
  const std::int64_t nodes = source_shape_.size() + target_shape_.size();
  if (nodes + 1 > kMaxIndex || nodes + arcs.size() > kMaxIndex) {
    throw OverflowError("transport network exceeds 2^31 nodes or arcs");
  }
  const Cost max_cost = max_sq_euclidean_cost(source_shape_, target_shape_);
  if (max_cost > std::numeric_limits<std::int32_t>::max()) {
    throw OverflowError("squared distances exceed 32 bits");
  }
  // M dominates any path of real arcs. Potentials stay within 2M in absolute
  // value, so 4M must fit for reduced-cost arithmetic.
  if (__builtin_mul_overflow(1 + max_cost, nodes + 1, &big_m_) ||
      big_m_ > std::numeric_limits<Cost>::max() / 4) {
    throw OverflowError("artificial cost M exceeds the 64-bit potential budget");
  }
  if (static_cast<Int128>(big_m_) * 2 * static_cast<Int128>(inst.total()) >
      (static_cast<Int128>(1) << 126)) {
    throw OverflowError("initial objective exceeds the 128-bit budget");
  }

  source_coords_ = CoordinateTable(source_shape_);
  target_coords_ = CoordinateTable(target_shape_);
  source_count_ = static_cast<std::int32_t>(source_shape_.size());
  target_count_ = static_cast<std::int32_t>(target_shape_.size());
  node_count_ = static_cast<std::int32_t>(nodes);
  root_ = node_count_;

  const auto n = static_cast<std::size_t>(node_count_) + 1;
  supply_.assign(n, 0);
  pi_.assign(n, 0);
  parent_.assign(n, -1);
  pred_.assign(n, -1);
  pred_dir_.assign(n, kUp);
  thread_.assign(n, 0);
  rev_thread_.assign(n, 0);
  succ_num_.assign(n, 1);
  last_succ_.assign(n, 0);

  for (std::int32_t s = 0; s < source_count_; ++s) supply_[s] = inst.mu().mass(s);
  for (std::int32_t t = 0; t < target_count_; ++t) {
    supply_[source_count_ + t] = -inst.nu().mass(t);
  }

  const auto arc_total = static_cast<std::size_t>(node_count_ + arcs.size());
  tail_.reserve(arc_total);
  head_.reserve(arc_total);
  cost_.reserve(arc_total);
  flow_.reserve(arc_total);
  state_.reserve(arc_total);

  // Artificial basis: node i hangs off the root through arc i.
  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = node_count_ + 1;
  last_succ_[root_] = root_ - 1;
  for (std::int32_t i = 0; i < node_count_; ++i) {
    parent_[i] = root_;
    pred_[i] = i;
    thread_[i] = i + 1;
    rev_thread_[i + 1] = i;
    succ_num_[i] = 1;
    last_succ_[i] = i;
    cost_.push_back(0);
    state_.push_back(kTree);
    if (supply_[i] >= 0) {
      pred_dir_[i] = kUp;
      pi_[i] = -big_m_;
      tail_.push_back(i);
      head_.push_back(root_);
      flow_.push_back(supply_[i]);
    } else {
      pred_dir_[i] = kDown;
      pi_[i] = big_m_;
      tail_.push_back(root_);
      head_.push_back(i);
      flow_.push_back(-supply_[i]);
    }
  }
  first_real_arc_ = node_count_;

  source_arc_begin_.assign(static_cast<std::size_t>(source_count_) + 1, 0);
  for (std::int32_t s = 0; s < source_count_; ++s) {
    source_arc_begin_[s] = static_cast<std::int32_t>(tail_.size());
    arcs.for_each_target(s, [&](std::int64_t t) {
      add_real_arc(s, source_count_ + static_cast<std::int32_t>(t), kLower, 0);
    });
  }
  source_arc_begin_[source_count_] = static_cast<std::int32_t>(tail_.size());
  arc_count_ = static_cast<std::int32_t>(tail_.size());
  reset_pricing();
}

Cost NetworkSimplex::arc_cost(std::int32_t tail, std::int32_t head) const {
  return sq_euclidean_cost(source_coords_[tail], target_coords_[head - source_count_]);
}

void NetworkSimplex::add_real_arc(std::int32_t source_node, std::int32_t target_node,
                                  std::int8_t state, Mass flow) {
  tail_.push_back(source_node);
  head_.push_back(target_node);
  cost_.push_back(static_cast<std::int32_t>(arc_cost(source_node, target_node)));
  flow_.push_back(flow);
  state_.push_back(state);
}

void NetworkSimplex::reset_pricing() {
  const std::int64_t m = arc_count_ - first_real_arc_;
  block_size_ = std::max<std::int32_t>(
      1, static_cast<std::int32_t>(std::ceil(std::sqrt(static_cast<double>(m)))));
  // Guard against floating point rounding of the square root.
  while (static_cast<std::int64_t>(block_size_) * block_size_ < m) ++block_size_;
  while (block_size_ > 1 &&
         static_cast<std::int64_t>(block_size_ - 1) * (block_size_ - 1) >= m) {
    --block_size_;
  }
  next_arc_ = first_real_arc_;
}

// Block search: scan blocks of arcs cyclically starting where the previous
// search stopped; take the most negative reduced cost of the first block
// that has one.
bool NetworkSimplex::find_entering_arc() {
  Cost min = 0;
  std::int32_t cnt = block_size_;
  std::int32_t e = next_arc_;
  std::int64_t scanned = 0;
  const std::int32_t* tail = tail_.data();
  const std::int32_t* head = head_.data();
  const std::int32_t* cost = cost_.data();
  const std::int8_t* state = state_.data();
  const Cost* pi = pi_.data();

  for (; e != arc_count_; ++e) {
    const Cost c = state[e] * (cost[e] + pi[tail[e]] - pi[head[e]]);
    ++scanned;
    if (c < min) {
      min = c;
      in_arc_ = e;
    }
    if (--cnt == 0) {
      if (min < 0) goto found;
      cnt = block_size_;
    }
  }
  for (e = first_real_arc_; e != next_arc_; ++e) {
    const Cost c = state[e] * (cost[e] + pi[tail[e]] - pi[head[e]]);
    ++scanned;
    if (c < min) {
      min = c;
      in_arc_ = e;
    }
    if (--cnt == 0) {
      if (min < 0) goto found;
      cnt = block_size_;
    }
  }
  if (min < 0) goto found;  // trailing partial block
  stats_.entering_scans += scanned;
  return false;

found:
  stats_.entering_scans += scanned;
  next_arc_ = e;
  return true;
}

void NetworkSimplex::find_join_node() {
  std::int32_t u = tail_[in_arc_];
  std::int32_t v = head_[in_arc_];
  while (u != v) {
    if (succ_num_[u] < succ_num_[v]) {
      u = parent_[u];
    } else {
      v = parent_[v];
    }
  }
  join_ = u;
}

// Ratio test on the cycle closed by the entering arc. Flow runs from the
// join down to the tail, across the entering arc, then up from the head.
// Ties go to the last blocking arc along that orientation, which keeps the
// basis strongly feasible.
bool NetworkSimplex::find_leaving_arc() {
  const std::int32_t first = tail_[in_arc_];
  const std::int32_t second = head_[in_arc_];
  delta_ = kInfiniteFlow;
  int result = 0;

  for (std::int32_t u = first; u != join_; u = parent_[u]) {
    if (pred_dir_[u] == kUp) {
      const Mass d = flow_[pred_[u]];
      if (d < delta_) {
        delta_ = d;
        u_out_ = u;
        result = 1;
      }
    }
  }
  for (std::int32_t u = second; u != join_; u = parent_[u]) {
    if (pred_dir_[u] == kDown) {
      const Mass d = flow_[pred_[u]];
      if (d <= delta_) {
        delta_ = d;
        u_out_ = u;
        result = 2;
      }
    }
  }

  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow() {
  if (delta_ > 0) {
    const Mass val = delta_;
    flow_[in_arc_] += val;
    for (std::int32_t u = tail_[in_arc_]; u != join_; u = parent_[u]) {
      flow_[pred_[u]] -= pred_dir_[u] * val;
    }
    for (std::int32_t u = head_[in_arc_]; u != join_; u = parent_[u]) {
      flow_[pred_[u]] += pred_dir_[u] * val;
    }
  }
  state_[in_arc_] = kTree;
  state_[pred_[u_out_]] = kLower;
}

void NetworkSimplex::update_tree_structure() {
  const std::int32_t old_rev_thread = rev_thread_[u_out_];
  const std::int32_t old_succ_num = succ_num_[u_out_];
  const std::int32_t old_last_succ = last_succ_[u_out_];
  const std::int32_t v_out = parent_[u_out_];

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == tail_[in_arc_] ? kUp : kDown;

    if (thread_[v_in_] != u_out_) {
      std::int32_t after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    // When old_rev_thread is v_in, join and v_out coincide.
    const std::int32_t thread_continue =
        old_rev_thread == v_in_ ? thread_[old_last_succ] : thread_[v_in_];

    // Re-hang the stem (the path u_in .. u_out) below v_in.
    std::int32_t stem = u_in_;
    std::int32_t par_stem = v_in_;
    std::int32_t last = last_succ_[u_in_];
    std::int32_t after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      const std::int32_t next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      const std::int32_t before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem] : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }

    for (const std::int32_t u : dirty_revs_) rev_thread_[thread_[u]] = u;

    // Reverse pred / orientation along the stem and fix subtree data.
    std::int32_t tmp_sc = 0;
    const std::int32_t tmp_ls = last_succ_[u_out_];
    for (std::int32_t u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = static_cast<std::int8_t>(-pred_dir_[p]);
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == tail_[in_arc_] ? kUp : kDown;
    succ_num_[u_in_] = old_succ_num;
  }

  // last_succ from v_in towards the root
  const std::int32_t up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const std::int32_t last_succ_out = last_succ_[u_out_];
  for (std::int32_t u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u]) {
    last_succ_[u] = last_succ_out;
  }

  // last_succ from v_out towards the root
  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (std::int32_t u = v_out; u != up_limit_out && last_succ_[u] == old_last_succ;
         u = parent_[u]) {
      last_succ_[u] = old_rev_thread;
    }
  } else if (last_succ_out != old_last_succ) {
    for (std::int32_t u = v_out; u != up_limit_out && last_succ_[u] == old_last_succ;
         u = parent_[u]) {
      last_succ_[u] = last_succ_out;
    }
  }

  for (std::int32_t u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
  for (std::int32_t u = v_out; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

// Shift the potentials of the re-hung subtree so the entering arc has zero
// reduced cost. The root never moves, so its potential stays 0.
void NetworkSimplex::update_potential() {
  const Cost sigma = pi_[v_in_] - pred_dir_[u_in_] * cost_of(in_arc_) - pi_[u_in_];
  const std::int32_t end = thread_[last_succ_[u_in_]];
  for (std::int32_t u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

bool NetworkSimplex::pivot_once() {
  if (!find_entering_arc()) return false;
  find_join_node();
  if (!find_leaving_arc()) {
    // A negative cycle of unbounded capacity; impossible with source->target
    // arcs only, so reaching this is an internal error.
    throw std::logic_error("network simplex: unbounded cycle");
  }
  change_flow();
  update_tree_structure();
  update_potential();
  ++stats_.pivots;
  return true;
}

SolveStats NetworkSimplex::run_pivots() {
  const SolveStats before = stats_;
  while (pivot_once()) {
  }
  if (artificial_flow() > 0) {
    throw InfeasibleRestriction("arc set admits no coupling: " +
                                std::to_string(artificial_flow()) +
                                " units remain on artificial arcs");
  }
  SolveStats delta;
  delta.pivots = stats_.pivots - before.pivots;
  delta.entering_scans = stats_.entering_scans - before.entering_scans;
  return delta;
}

ReplaceStats NetworkSimplex::replace_arcs(const Neighborhood& arcs) {
  if (!(arcs.source_shape() == source_shape_) || !(arcs.target_shape() == target_shape_)) {
    throw InvalidArgument("neighborhood does not match the instance grids");
  }
  const std::int64_t old_real = arc_count_ - first_real_arc_;
  if (node_count_ + arcs.size() + node_count_ > kMaxIndex) {
    throw OverflowError("transport network exceeds 2^31 arcs");
  }

  // Basic real arcs grouped by source, ascending target: (target node, owner node).
  struct BasicArc {
    std::int32_t target;
    std::int32_t owner;
  };
  std::vector<std::int32_t> basic_begin(static_cast<std::size_t>(source_count_) + 1, 0);
  for (std::int32_t u = 0; u < node_count_; ++u) {
    if (pred_[u] >= first_real_arc_) ++basic_begin[tail_[pred_[u]] + 1];
  }
  for (std::int32_t s = 0; s < source_count_; ++s) basic_begin[s + 1] += basic_begin[s];
  std::vector<BasicArc> basic(static_cast<std::size_t>(basic_begin[source_count_]));
  {
    std::vector<std::int32_t> fill(basic_begin.begin(), basic_begin.end() - 1);
    for (std::int32_t u = 0; u < node_count_; ++u) {
      const std::int32_t e = pred_[u];
      if (e >= first_real_arc_) basic[fill[tail_[e]]++] = {head_[e], u};
    }
  }
  for (std::int32_t s = 0; s < source_count_; ++s) {
    std::sort(basic.begin() + basic_begin[s], basic.begin() + basic_begin[s + 1],
              [](const BasicArc& a, const BasicArc& b) { return a.target < b.target; });
  }

  std::vector<std::int32_t> new_tail(tail_.begin(), tail_.begin() + first_real_arc_);
  std::vector<std::int32_t> new_head(head_.begin(), head_.begin() + first_real_arc_);
  std::vector<std::int32_t> new_cost(cost_.begin(), cost_.begin() + first_real_arc_);
  std::vector<Mass> new_flow(flow_.begin(), flow_.begin() + first_real_arc_);
  std::vector<std::int8_t> new_state(state_.begin(), state_.begin() + first_real_arc_);
  const auto reserve = static_cast<std::size_t>(first_real_arc_ + arcs.size() + basic.size());
  new_tail.reserve(reserve);
  new_head.reserve(reserve);
  new_cost.reserve(reserve);
  new_flow.reserve(reserve);
  new_state.reserve(reserve);

  // Per-target stamps: which source last owned an old arc / a basic arc there.
  std::vector<std::int32_t> old_stamp(static_cast<std::size_t>(target_count_), -1);
  std::vector<std::int32_t> basic_stamp(static_cast<std::size_t>(target_count_), -1);
  std::vector<std::int32_t> basic_slot(static_cast<std::size_t>(target_count_), 0);
  std::vector<char> placed(basic.size(), 0);

  ReplaceStats rs;
  std::int64_t kept = 0;
  std::vector<std::int32_t> new_begin(static_cast<std::size_t>(source_count_) + 1, 0);
  for (std::int32_t s = 0; s < source_count_; ++s) {
    new_begin[s] = static_cast<std::int32_t>(new_tail.size());
    for (std::int32_t e = source_arc_begin_[s]; e < source_arc_begin_[s + 1]; ++e) {
      old_stamp[head_[e] - source_count_] = s;
    }
    for (std::int32_t k = basic_begin[s]; k < basic_begin[s + 1]; ++k) {
      const auto t = basic[k].target - source_count_;
      basic_stamp[t] = s;
      basic_slot[t] = k;
    }
    arcs.for_each_target(s, [&](std::int64_t t64) {
      const auto t = static_cast<std::int32_t>(t64);
      const std::int32_t target_node = source_count_ + t;
      const auto id = static_cast<std::int32_t>(new_tail.size());
      if (old_stamp[t] == s) {
        ++kept;
      } else {
        ++rs.added;
      }
      new_tail.push_back(s);
      new_head.push_back(target_node);
      new_cost.push_back(static_cast<std::int32_t>(arc_cost(s, target_node)));
      if (basic_stamp[t] == s) {
        const auto k = basic_slot[t];
        const auto owner = basic[k].owner;
        new_flow.push_back(flow_[pred_[owner]]);
        new_state.push_back(kTree);
        pred_[owner] = id;
        placed[k] = 1;
      } else {
        new_flow.push_back(0);
        new_state.push_back(kLower);
      }
    });
    for (std::int32_t k = basic_begin[s]; k < basic_begin[s + 1]; ++k) {
      if (placed[k]) continue;
      const auto owner = basic[k].owner;
      const auto id = static_cast<std::int32_t>(new_tail.size());
      new_tail.push_back(s);
      new_head.push_back(basic[k].target);
      new_cost.push_back(cost_[pred_[owner]]);
      new_flow.push_back(flow_[pred_[owner]]);
      new_state.push_back(kTree);
      pred_[owner] = id;
      ++kept;
      ++rs.retained_basic_outside;
    }
  }
  new_begin[source_count_] = static_cast<std::int32_t>(new_tail.size());

  tail_ = std::move(new_tail);
  head_ = std::move(new_head);
  cost_ = std::move(new_cost);
  flow_ = std::move(new_flow);
  state_ = std::move(new_state);
  source_arc_begin_ = std::move(new_begin);
  arc_count_ = static_cast<std::int32_t>(tail_.size());
  reset_pricing();

  rs.removed = old_real - kept;
  rs.arc_count = arc_count_ - first_real_arc_;
  ++stats_.arc_replacements;
  return rs;
}

TransportPlan NetworkSimplex::current_plan() const {
  std::vector<PlanEntry> entries;
  for (std::int32_t e = first_real_arc_; e < arc_count_; ++e) {
    if (flow_[e] > 0) entries.push_back({tail_[e], head_[e] - source_count_, flow_[e]});
  }
  return TransportPlan(source_shape_, target_shape_, std::move(entries));
}

Potentials NetworkSimplex::current_potentials() const {
  Potentials p;
  p.u.resize(static_cast<std::size_t>(source_count_));
  p.v.resize(static_cast<std::size_t>(target_count_));
  for (std::int32_t s = 0; s < source_count_; ++s) p.u[s] = -pi_[s];
  for (std::int32_t t = 0; t < target_count_; ++t) p.v[t] = pi_[source_count_ + t];
  return p;
}

Int128 NetworkSimplex::objective() const {
  Int128 total = 0;
  for (std::int32_t e = 0; e < arc_count_; ++e) {
    if (flow_[e] != 0) total += static_cast<Int128>(flow_[e]) * cost_of(e);
  }
  return total;
}

Mass NetworkSimplex::artificial_flow() const {
  Mass total = 0;
  for (std::int32_t e = 0; e < first_real_arc_; ++e) total += flow_[e];
  return total;
}

bool NetworkSimplex::assert_optimal_basis() const {
  for (std::int32_t e = 0; e < arc_count_; ++e) {
    const Cost rc = reduced_cost(e);
    if (state_[e] == kTree) {
      if (rc != 0) return false;
    } else if (e >= first_real_arc_ && rc < 0) {
      return false;
    }
  }
  return true;
}

bool NetworkSimplex::check_invariants() const {
  const std::int32_t n = node_count_ + 1;
  if (parent_[root_] != -1) return false;

  std::int64_t tree_arcs = 0;
  for (std::int32_t e = 0; e < arc_count_; ++e) {
    if (flow_[e] < 0) return false;
    if (state_[e] == kTree) {
      ++tree_arcs;
      if (reduced_cost(e) != 0) return false;
    } else if (flow_[e] != 0) {
      return false;
    }
  }
  if (tree_arcs != node_count_) return false;

  for (std::int32_t u = 0; u < node_count_; ++u) {
    const std::int32_t p = parent_[u];
    const std::int32_t e = pred_[u];
    if (p < 0 || p >= n || e < 0 || e >= arc_count_ || state_[e] != kTree) return false;
    if (pred_dir_[u] == kUp ? (tail_[e] != u || head_[e] != p)
                            : (tail_[e] != p || head_[e] != u)) {
      return false;
    }
  }

  // Thread: a single cycle through all nodes starting at the root, with
  // every subtree occupying a contiguous stretch of succ_num nodes.
  std::vector<std::int32_t> pos(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> order;
  order.reserve(static_cast<std::size_t>(n));
  std::int32_t u = root_;
  for (std::int32_t k = 0; k < n; ++k) {
    if (pos[u] != -1) return false;
    pos[u] = k;
    order.push_back(u);
    if (rev_thread_[thread_[u]] != u) return false;
    u = thread_[u];
  }
  if (u != root_) return false;

  std::vector<std::int32_t> size(static_cast<std::size_t>(n), 1);
  for (std::int32_t k = n - 1; k > 0; --k) size[parent_[order[k]]] += size[order[k]];
  for (std::int32_t v = 0; v < n; ++v) {
    if (succ_num_[v] != size[v]) return false;
    if (last_succ_[v] != order[pos[v] + size[v] - 1]) return false;
    if (v != root_) {
      const std::int32_t p = parent_[v];
      if (!(pos[p] < pos[v] && pos[v] < pos[p] + size[p])) return false;
    }
  }

  std::vector<Mass> balance(static_cast<std::size_t>(n), 0);
  for (std::int32_t e = 0; e < arc_count_; ++e) {
    balance[tail_[e]] += flow_[e];
    balance[head_[e]] -= flow_[e];
  }
  for (std::int32_t v = 0; v < n; ++v) {
    if (balance[v] != supply_[v]) return false;
  }
  return true;
}

FlowSnapshot NetworkSimplex::flow_snapshot() const {
  FlowSnapshot snap;
  for (std::int32_t e = 0; e < arc_count_; ++e) {
    if (flow_[e] > 0) snap.emplace_back(tail_[e], head_[e], flow_[e]);
  }
  std::sort(snap.begin(), snap.end());
  return snap;
}

}  // namespace gridot
