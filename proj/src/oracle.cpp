#include "sgebench/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace sgebench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --------------------------------------------------------------------------
// Assignment
// --------------------------------------------------------------------------

OracleResult solve_assignment_enum(const ProblemInstance& inst) {
  const auto& c = inst.assignment().cost_matrix;
  const int n = inst.size_n;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  OracleResult result;
  result.optimal_cost = std::numeric_limits<double>::infinity();
  do {
    double total = 0;
    for (int i = 0; i < n; ++i) {
      total += c[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[i])];
    }
    result.explored += 1;
    if (total < result.optimal_cost) {  // lex order of next_permutation breaks ties
      result.optimal_cost = total;
      result.optimal_solution = Solution{inst.task, PermSolution{perm}};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

OracleResult solve_assignment(const ProblemInstance& inst, const OracleBounds& bounds) {
  if (inst.size_n <= bounds.assignment_enum_max_n) return solve_assignment_enum(inst);
  auto [perm, cost] = hungarian(inst.assignment().cost_matrix);
  OracleResult result;
  result.optimal_cost = cost;
  result.optimal_solution = Solution{inst.task, PermSolution{std::move(perm)}};
  result.explored = static_cast<std::uint64_t>(inst.size_n);
  return result;
}

// --------------------------------------------------------------------------
// Knapsack
// --------------------------------------------------------------------------

OracleResult solve_knapsack_enum(const ProblemInstance& inst) {
  const auto& p = inst.knapsack();
  const int n = inst.size_n;
  OracleResult result;
  result.optimal_cost = -1;
  std::vector<int> best;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double weight = 0, value = 0;
    std::vector<int> items;
    for (int i = 0; i < n; ++i) {
      if (mask & (1ULL << i)) {
        weight += p.weights[static_cast<std::size_t>(i)];
        value += p.values[static_cast<std::size_t>(i)];
        items.push_back(i);
      }
    }
    result.explored += 1;
    if (weight > p.capacity) continue;
    if (value > result.optimal_cost ||
        (value == result.optimal_cost && items < best)) {
      result.optimal_cost = value;
      best = std::move(items);
    }
  }
  result.optimal_solution = Solution{inst.task, SelectionSolution{std::move(best)}};
  return result;
}

OracleResult solve_knapsack(const ProblemInstance& inst, const OracleBounds& bounds) {
  if (inst.size_n <= bounds.knapsack_enum_max_n) return solve_knapsack_enum(inst);
  const auto& p = inst.knapsack();
  auto [items, value] = knapsack_dp(p.weights, p.values, p.capacity);
  OracleResult result;
  result.optimal_cost = value;
  result.optimal_solution = Solution{inst.task, SelectionSolution{std::move(items)}};
  result.explored = static_cast<std::uint64_t>(inst.size_n);
  return result;
}

// --------------------------------------------------------------------------
// Bin packing: restricted-growth DFS (bin labels in order of first use), so
// symmetric relabelings are never visited and the first optimum found is the
// lexicographically smallest bin_of vector.
// --------------------------------------------------------------------------

struct BinPackState {
  const std::vector<double>* sizes = nullptr;
  double capacity = 0;
  std::vector<int> bin_of;
  std::vector<double> load;
  std::vector<int> best;
  int best_count = 0;
  double remaining = 0;
  std::uint64_t explored = 0;
};

void binpack_dfs(BinPackState& st, int item) {
  st.explored += 1;
  const int used = static_cast<int>(st.load.size());
  if (item == static_cast<int>(st.sizes->size())) {
    if (used < st.best_count) {
      st.best_count = used;
      st.best = st.bin_of;
    }
    return;
  }
  double slack = 0;
  for (double l : st.load) slack += st.capacity - l;
  int bound = used;
  if (st.remaining > slack) {
    bound += static_cast<int>(std::ceil((st.remaining - slack) / st.capacity - 1e-9));
  }
  if (bound >= st.best_count) return;

  const double w = (*st.sizes)[static_cast<std::size_t>(item)];
  st.remaining -= w;
  for (int b = 0; b < used; ++b) {
    if (st.load[static_cast<std::size_t>(b)] + w <= st.capacity + 1e-9) {
      st.load[static_cast<std::size_t>(b)] += w;
      st.bin_of[static_cast<std::size_t>(item)] = b;
      binpack_dfs(st, item + 1);
      st.load[static_cast<std::size_t>(b)] -= w;
    }
  }
  if (used + 1 < st.best_count) {
    st.load.push_back(w);
    st.bin_of[static_cast<std::size_t>(item)] = used;
    binpack_dfs(st, item + 1);
    st.load.pop_back();
  }
  st.remaining += w;
}

OracleResult solve_binpacking(const ProblemInstance& inst) {
  const auto& p = inst.bin_packing();
  BinPackState st;
  st.sizes = &p.sizes;
  st.capacity = p.capacity;
  st.bin_of.assign(static_cast<std::size_t>(inst.size_n), -1);
  st.best_count = inst.size_n + 1;
  st.remaining = std::accumulate(p.sizes.begin(), p.sizes.end(), 0.0);
  binpack_dfs(st, 0);
  OracleResult result;
  result.optimal_cost = static_cast<double>(st.best_count);
  result.optimal_solution = Solution{inst.task, BinSolution{std::move(st.best)}};
  result.explored = st.explored;
  return result;
}

// --------------------------------------------------------------------------
// TSP: fixed start at city 0, enumerate the remaining (n-1)! orders.
// --------------------------------------------------------------------------

OracleResult solve_tsp(const ProblemInstance& inst) {
  const int n = inst.size_n;
  const auto& cities = inst.tsp().cities;
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          euclid(cities[static_cast<std::size_t>(i)], cities[static_cast<std::size_t>(j)]);
    }
  }
  OracleResult result;
  result.optimal_cost = std::numeric_limits<double>::infinity();
  std::vector<int> rest(static_cast<std::size_t>(n - 1));
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<int> tour(static_cast<std::size_t>(n));
  tour[0] = 0;
  std::vector<int> best;
  // Raw running sums prune cheaply; near-best candidates get the exact
  // (order-independent) evaluate so float ties resolve deterministically.
  do {
    std::copy(rest.begin(), rest.end(), tour.begin() + 1);
    result.explored += 1;
    double raw = 0;
    for (int k = 0; k < n; ++k) {
      raw += d[static_cast<std::size_t>(tour[static_cast<std::size_t>(k)])]
              [static_cast<std::size_t>(tour[static_cast<std::size_t>((k + 1) % n)])];
    }
    if (raw > result.optimal_cost + 1e-6) continue;
    const Solution candidate{inst.task, PermSolution{tour}};
    const double cost = evaluate(inst, candidate).value;
    if (cost < result.optimal_cost ||
        (cost == result.optimal_cost && (best.empty() || tour < best))) {
      result.optimal_cost = cost;
      best = tour;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  result.optimal_solution = Solution{inst.task, PermSolution{std::move(best)}};
  return result;
}

// --------------------------------------------------------------------------
// VRP: enumerate customer permutations x route split masks; shuttle legs are
// a solution-independent constant added by the evaluator.
// --------------------------------------------------------------------------

OracleResult solve_vrp(const ProblemInstance& inst) {
  const auto& p = inst.vrp();
  const int n = inst.size_n;
  std::vector<double> residual(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    residual[static_cast<std::size_t>(i)] =
        vrp_residual_demand(p.demands[static_cast<std::size_t>(i)], p.vehicle_capacity);
  }
  // d[0] = depot, d[1..n] = customers; shuttle legs are candidate-independent.
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n) + 1,
                                     std::vector<double>(static_cast<std::size_t>(n) + 1, 0));
  auto point_at = [&](int k) -> const Point& {
    return k == 0 ? p.depot : p.customers[static_cast<std::size_t>(k - 1)];
  };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = euclid(point_at(i), point_at(j));
    }
  }
  OracleResult result;
  result.optimal_cost = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> best;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  const std::uint32_t split_limit = n >= 2 ? (1u << (n - 1)) : 1u;
  do {
    for (std::uint32_t mask = 0; mask < split_limit; ++mask) {
      if (std::popcount(mask) + 1 > p.fleet_size) continue;
      result.explored += 1;
      bool feasible = true;
      double load = 0;
      double raw = 0;
      int prev = 0;
      for (int k = 0; k < n && feasible; ++k) {
        const int c = perm[static_cast<std::size_t>(k)];
        raw += d[static_cast<std::size_t>(prev)][static_cast<std::size_t>(c) + 1];
        prev = c + 1;
        load += residual[static_cast<std::size_t>(c)];
        if (load > p.vehicle_capacity + 1e-9) feasible = false;
        if (k == n - 1 || (mask & (1u << k))) {
          raw += d[static_cast<std::size_t>(prev)][0];
          prev = 0;
          load = 0;
        }
      }
      if (!feasible || raw > result.optimal_cost + 1e-6) continue;
      std::vector<std::vector<int>> routes(1);
      for (int k = 0; k < n; ++k) {
        routes.back().push_back(perm[static_cast<std::size_t>(k)]);
        if (k < n - 1 && (mask & (1u << k))) routes.emplace_back();
      }
      const Solution candidate{inst.task, RoutesSolution{std::move(routes)}};
      const double cost = evaluate_with_shuttle(inst, candidate).value;
      if (cost < result.optimal_cost ||
          (cost == result.optimal_cost &&
           (best.empty() || candidate.routes().routes < best))) {
        result.optimal_cost = cost;
        best = candidate.routes().routes;
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  result.optimal_solution = Solution{inst.task, RoutesSolution{std::move(best)}};
  return result;
}

// --------------------------------------------------------------------------
// JSP: depth-first over operation interleavings (semi-active schedules) with
// a machine/job availability lower bound.
// --------------------------------------------------------------------------

struct JspState {
  const JspPayload* p = nullptr;
  int n = 0;
  std::vector<std::size_t> next_op;
  std::vector<double> job_ready;
  std::vector<double> machine_ready;
  std::vector<double> machine_load_left;
  std::vector<double> job_work_left;
  std::vector<std::vector<double>> start;
  std::vector<std::vector<double>> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::uint64_t explored = 0;
};

void jsp_dfs(JspState& st, int remaining, double makespan) {
  st.explored += 1;
  if (remaining == 0) {
    if (makespan < st.best_cost ||
        (makespan == st.best_cost && st.start < st.best)) {
      st.best_cost = makespan;
      st.best = st.start;
    }
    return;
  }
  double lb = makespan;
  for (int m = 0; m < st.p->machine_count; ++m) {
    lb = std::max(lb, st.machine_ready[static_cast<std::size_t>(m)] +
                          st.machine_load_left[static_cast<std::size_t>(m)]);
  }
  for (int i = 0; i < st.n; ++i) {
    lb = std::max(lb, st.job_ready[static_cast<std::size_t>(i)] +
                          st.job_work_left[static_cast<std::size_t>(i)]);
  }
  if (lb > st.best_cost) return;

  for (int i = 0; i < st.n; ++i) {
    const std::size_t j = st.next_op[static_cast<std::size_t>(i)];
    if (j >= st.p->jobs[static_cast<std::size_t>(i)].size()) continue;
    const auto& op = st.p->jobs[static_cast<std::size_t>(i)][j];
    const double s = std::max(st.job_ready[static_cast<std::size_t>(i)],
                              st.machine_ready[static_cast<std::size_t>(op.machine)]);
    const double e = s + op.duration;

    const double save_job = st.job_ready[static_cast<std::size_t>(i)];
    const double save_machine = st.machine_ready[static_cast<std::size_t>(op.machine)];
    st.start[static_cast<std::size_t>(i)][j] = s;
    st.job_ready[static_cast<std::size_t>(i)] = e;
    st.machine_ready[static_cast<std::size_t>(op.machine)] = e;
    st.machine_load_left[static_cast<std::size_t>(op.machine)] -= op.duration;
    st.job_work_left[static_cast<std::size_t>(i)] -= op.duration;
    st.next_op[static_cast<std::size_t>(i)] += 1;

    jsp_dfs(st, remaining - 1, std::max(makespan, e));

    st.next_op[static_cast<std::size_t>(i)] -= 1;
    st.job_work_left[static_cast<std::size_t>(i)] += op.duration;
    st.machine_load_left[static_cast<std::size_t>(op.machine)] += op.duration;
    st.machine_ready[static_cast<std::size_t>(op.machine)] = save_machine;
    st.job_ready[static_cast<std::size_t>(i)] = save_job;
    st.start[static_cast<std::size_t>(i)][j] = 0;
  }
}

OracleResult solve_jsp(const ProblemInstance& inst) {
  const auto& p = inst.jsp();
  JspState st;
  st.p = &p;
  st.n = inst.size_n;
  st.next_op.assign(static_cast<std::size_t>(st.n), 0);
  st.job_ready.assign(static_cast<std::size_t>(st.n), 0);
  st.machine_ready.assign(static_cast<std::size_t>(p.machine_count), 0);
  st.machine_load_left.assign(static_cast<std::size_t>(p.machine_count), 0);
  st.job_work_left.assign(static_cast<std::size_t>(st.n), 0);
  int total_ops = 0;
  for (int i = 0; i < st.n; ++i) {
    st.start.emplace_back(p.jobs[static_cast<std::size_t>(i)].size(), 0.0);
    for (const auto& op : p.jobs[static_cast<std::size_t>(i)]) {
      st.machine_load_left[static_cast<std::size_t>(op.machine)] += op.duration;
      st.job_work_left[static_cast<std::size_t>(i)] += op.duration;
      total_ops += 1;
    }
  }
  jsp_dfs(st, total_ops, 0);
  OracleResult result;
  result.optimal_cost = st.best_cost;
  result.optimal_solution = Solution{inst.task, ScheduleSolution{std::move(st.best)}};
  result.explored = st.explored;
  return result;
}

int jsp_total_ops(const ProblemInstance& inst) {
  int total = 0;
  for (const auto& ops : inst.jsp().jobs) total += static_cast<int>(ops.size());
  return total;
}

bool knapsack_weights_integral(const KnapsackPayload& p) {
  for (double w : p.weights) {
    if (std::floor(w) != w) return false;
  }
  return true;
}

}  // namespace

bool oracle_tractable(const ProblemInstance& inst, const OracleBounds& bounds) {
  switch (inst.task) {
    case TaskKind::Assignment: return true;  // Hungarian beyond the enumeration bound
    case TaskKind::Knapsack:
      return inst.size_n <= bounds.knapsack_enum_max_n ||
             knapsack_weights_integral(inst.knapsack());
    case TaskKind::BinPacking: return inst.size_n <= bounds.binpacking_max_n;
    case TaskKind::Tsp: return inst.size_n <= bounds.tsp_max_n;
    case TaskKind::Vrp: return inst.size_n <= bounds.vrp_max_n;
    case TaskKind::Jsp: return jsp_total_ops(inst) <= bounds.jsp_max_ops;
  }
  return false;
}

OracleResult solve_exact(const ProblemInstance& inst, const OracleBounds& bounds) {
  check_instance(inst);
  if (!oracle_tractable(inst, bounds)) {
    throw OracleBoundError(std::string(task_name(inst.task)) + " instance of size " +
                           std::to_string(inst.size_n) + " exceeds the exact-solve bound");
  }
  const auto t0 = Clock::now();
  OracleResult result;
  switch (inst.task) {
    case TaskKind::Assignment: result = solve_assignment(inst, bounds); break;
    case TaskKind::Knapsack: result = solve_knapsack(inst, bounds); break;
    case TaskKind::BinPacking: result = solve_binpacking(inst); break;
    case TaskKind::Tsp: result = solve_tsp(inst); break;
    case TaskKind::Vrp: result = solve_vrp(inst); break;
    case TaskKind::Jsp: result = solve_jsp(inst); break;
  }
  result.elapsed_seconds = seconds_since(t0);
  return result;
}

std::pair<std::vector<int>, double> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) throw std::invalid_argument("hungarian: empty matrix");
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("hungarian: matrix must be square");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("hungarian: entries must be finite");
    }
  }
  // Potentials formulation, 1-based with a virtual row/column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0), v(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  double total = 0;
  for (int i = 0; i < n; ++i) {
    total += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[i])];
  }
  return {std::move(perm), total};
}

std::pair<std::vector<int>, double> knapsack_dp(const std::vector<double>& weights,
                                                const std::vector<double>& values,
                                                double capacity) {
  const int n = static_cast<int>(weights.size());
  if (static_cast<int>(values.size()) != n) {
    throw std::invalid_argument("knapsack_dp: weights/values size mismatch");
  }
  std::vector<int> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (std::floor(weights[static_cast<std::size_t>(i)]) != weights[static_cast<std::size_t>(i)]) {
      throw std::invalid_argument("knapsack_dp: non-integer weight at index " + std::to_string(i));
    }
    w[static_cast<std::size_t>(i)] = static_cast<int>(weights[static_cast<std::size_t>(i)]);
  }
  const int cap = capacity > 0 ? static_cast<int>(std::floor(capacity)) : 0;
  if (static_cast<long long>(cap + 1) * (n + 1) > 50'000'000) {
    throw std::invalid_argument("knapsack_dp: capacity * n exceeds the memory budget");
  }
  // best[i][c] = max value achievable with items i..n-1 under capacity c.
  std::vector<std::vector<double>> best(static_cast<std::size_t>(n) + 1,
                                        std::vector<double>(static_cast<std::size_t>(cap) + 1, 0));
  for (int i = n - 1; i >= 0; --i) {
    for (int c = 0; c <= cap; ++c) {
      double take = -1;
      if (w[static_cast<std::size_t>(i)] <= c) {
        take = values[static_cast<std::size_t>(i)] +
               best[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(c - w[static_cast<std::size_t>(i)])];
      }
      best[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
          std::max(best[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(c)], take);
    }
  }
  // Greedy reconstruction: include the earliest item whenever an optimal
  // completion still exists, which yields the lexicographically smallest set.
  std::vector<int> picked;
  int c = cap;
  for (int i = 0; i < n; ++i) {
    if (w[static_cast<std::size_t>(i)] <= c) {
      const double with =
          values[static_cast<std::size_t>(i)] +
          best[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(c - w[static_cast<std::size_t>(i)])];
      if (with == best[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) {
        picked.push_back(i);
        c -= w[static_cast<std::size_t>(i)];
      }
    }
  }
  return {std::move(picked), best[0][static_cast<std::size_t>(cap)]};
}

}  // namespace sgebench
