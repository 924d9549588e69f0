#include "sgebench/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sgebench {

namespace {

constexpr double kImprovementEps = 1e-9;

// One full first-improvement pass over a cyclic tour; returns true if a move
// was accepted. Position 0 stays fixed.
bool two_opt_pass_tour(const std::vector<Point>& cities, std::vector<int>& tour) {
  const int n = static_cast<int>(tour.size());
  auto d = [&](int a, int b) {
    return euclid(cities[static_cast<std::size_t>(a)], cities[static_cast<std::size_t>(b)]);
  };
  for (int i = 1; i < n - 1; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int a = tour[static_cast<std::size_t>(i - 1)];
      const int b = tour[static_cast<std::size_t>(i)];
      const int c = tour[static_cast<std::size_t>(j)];
      const int e = tour[static_cast<std::size_t>((j + 1) % n)];
      const double delta = d(a, c) + d(b, e) - d(a, b) - d(c, e);
      if (delta < -kImprovementEps) {
        std::reverse(tour.begin() + i, tour.begin() + j + 1);
        return true;
      }
    }
  }
  return false;
}

// First-improvement 2-opt on an open route with fixed depot endpoints.
bool two_opt_pass_route(const VrpPayload& p, std::vector<int>& route) {
  const int len = static_cast<int>(route.size());
  auto at = [&](int k) -> const Point& {
    if (k < 0 || k >= len) return p.depot;
    return p.customers[static_cast<std::size_t>(route[static_cast<std::size_t>(k)])];
  };
  for (int i = 0; i < len - 1; ++i) {
    for (int j = i + 1; j < len; ++j) {
      const double delta = euclid(at(i - 1), at(j)) + euclid(at(i), at(j + 1)) -
                           euclid(at(i - 1), at(i)) - euclid(at(j), at(j + 1));
      if (delta < -kImprovementEps) {
        std::reverse(route.begin() + i, route.begin() + j + 1);
        return true;
      }
    }
  }
  return false;
}

}  // namespace

Solution nearest_neighbor(const ProblemInstance& inst, int start) {
  const auto& cities = inst.tsp().cities;
  const int n = inst.size_n;
  if (n < 2) throw std::invalid_argument("nearest_neighbor requires n >= 2");
  if (start < 0 || start >= n) throw std::invalid_argument("nearest_neighbor: bad start city");
  std::vector<char> visited(static_cast<std::size_t>(n), 0);
  std::vector<int> tour;
  tour.reserve(static_cast<std::size_t>(n));
  int current = start;
  visited[static_cast<std::size_t>(current)] = 1;
  tour.push_back(current);
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int next = 0; next < n; ++next) {
      if (visited[static_cast<std::size_t>(next)]) continue;
      const double dist = euclid(cities[static_cast<std::size_t>(current)],
                                 cities[static_cast<std::size_t>(next)]);
      if (dist < best_d) {
        best_d = dist;
        best = next;
      }
    }
    visited[static_cast<std::size_t>(best)] = 1;
    tour.push_back(best);
    current = best;
  }
  return Solution{inst.task, PermSolution{std::move(tour)}};
}

Solution two_opt(const ProblemInstance& inst, const Solution& initial) {
  const ValidationResult check = validate(inst, initial);
  if (!check.ok) {
    throw std::invalid_argument("two_opt requires a valid initial solution: " +
                                check.violations[0]);
  }
  if (inst.task == TaskKind::Tsp) {
    std::vector<int> tour = initial.perm().perm;
    while (two_opt_pass_tour(inst.tsp().cities, tour)) {
    }
    return Solution{inst.task, PermSolution{std::move(tour)}};
  }
  if (inst.task == TaskKind::Vrp) {
    std::vector<std::vector<int>> routes = initial.routes().routes;
    for (auto& route : routes) {
      while (two_opt_pass_route(inst.vrp(), route)) {
      }
    }
    return Solution{inst.task, RoutesSolution{std::move(routes)}};
  }
  throw std::invalid_argument("two_opt applies to tsp tours or vrp routes");
}

Solution greedy_knapsack(const ProblemInstance& inst) {
  const auto& p = inst.knapsack();
  const int n = inst.size_n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double da = p.values[static_cast<std::size_t>(a)] / p.weights[static_cast<std::size_t>(a)];
    const double db = p.values[static_cast<std::size_t>(b)] / p.weights[static_cast<std::size_t>(b)];
    if (da != db) return da > db;
    return a < b;
  });
  std::vector<int> picked;
  double load = 0;
  double value = 0;
  for (int i : order) {
    if (load + p.weights[static_cast<std::size_t>(i)] <= p.capacity) {
      load += p.weights[static_cast<std::size_t>(i)];
      value += p.values[static_cast<std::size_t>(i)];
      picked.push_back(i);
    }
  }
  // Repair pass: a single heavy item can beat the density ordering.
  int best_single = -1;
  for (int i = 0; i < n; ++i) {
    if (p.weights[static_cast<std::size_t>(i)] > p.capacity) continue;
    if (best_single < 0 ||
        p.values[static_cast<std::size_t>(i)] > p.values[static_cast<std::size_t>(best_single)]) {
      best_single = i;
    }
  }
  if (best_single >= 0 && p.values[static_cast<std::size_t>(best_single)] > value) {
    picked = {best_single};
  }
  std::sort(picked.begin(), picked.end());
  return Solution{inst.task, SelectionSolution{std::move(picked)}};
}

Solution index_greedy_knapsack(const ProblemInstance& inst) {
  const auto& p = inst.knapsack();
  std::vector<int> picked;
  double load = 0;
  for (int i = 0; i < inst.size_n; ++i) {
    if (load + p.weights[static_cast<std::size_t>(i)] <= p.capacity) {
      load += p.weights[static_cast<std::size_t>(i)];
      picked.push_back(i);
    }
  }
  return Solution{inst.task, SelectionSolution{std::move(picked)}};
}

namespace {

Solution first_fit_order(const ProblemInstance& inst, const std::vector<int>& order) {
  const auto& p = inst.bin_packing();
  std::vector<int> bin_of(static_cast<std::size_t>(inst.size_n), -1);
  std::vector<double> load;
  for (int i : order) {
    const double w = p.sizes[static_cast<std::size_t>(i)];
    int chosen = -1;
    for (std::size_t b = 0; b < load.size(); ++b) {
      if (load[b] + w <= p.capacity) {
        chosen = static_cast<int>(b);
        break;
      }
    }
    if (chosen < 0) {
      chosen = static_cast<int>(load.size());
      load.push_back(0);
    }
    load[static_cast<std::size_t>(chosen)] += w;
    bin_of[static_cast<std::size_t>(i)] = chosen;
  }
  return Solution{inst.task, BinSolution{std::move(bin_of)}};
}

}  // namespace

Solution first_fit_decreasing(const ProblemInstance& inst) {
  const auto& p = inst.bin_packing();
  std::vector<int> order(static_cast<std::size_t>(inst.size_n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double wa = p.sizes[static_cast<std::size_t>(a)];
    const double wb = p.sizes[static_cast<std::size_t>(b)];
    if (wa != wb) return wa > wb;
    return a < b;
  });
  return first_fit_order(inst, order);
}

Solution first_fit(const ProblemInstance& inst) {
  std::vector<int> order(static_cast<std::size_t>(inst.size_n));
  std::iota(order.begin(), order.end(), 0);
  return first_fit_order(inst, order);
}

Solution sweep_vrp_construction(const ProblemInstance& inst) {
  const auto& p = inst.vrp();
  const int n = inst.size_n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ta = std::atan2(p.customers[static_cast<std::size_t>(a)].y - p.depot.y,
                                 p.customers[static_cast<std::size_t>(a)].x - p.depot.x);
    const double tb = std::atan2(p.customers[static_cast<std::size_t>(b)].y - p.depot.y,
                                 p.customers[static_cast<std::size_t>(b)].x - p.depot.x);
    if (ta != tb) return ta < tb;
    return a < b;
  });
  std::vector<std::vector<int>> routes;
  double load = 0;
  for (int c : order) {
    const double q = vrp_residual_demand(p.demands[static_cast<std::size_t>(c)],
                                         p.vehicle_capacity);
    if (routes.empty() || load + q > p.vehicle_capacity) {
      routes.emplace_back();
      load = 0;
    }
    routes.back().push_back(c);
    load += q;
  }
  return Solution{inst.task, RoutesSolution{std::move(routes)}};
}

Solution sweep_vrp(const ProblemInstance& inst) {
  return two_opt(inst, sweep_vrp_construction(inst));
}

namespace detail {

Solution jsp_dispatch(const ProblemInstance& inst, int priority) {
  const auto& p = inst.jsp();
  const int n = inst.size_n;
  std::vector<std::size_t> next_op(static_cast<std::size_t>(n), 0);
  std::vector<double> job_ready(static_cast<std::size_t>(n), 0);
  std::vector<double> machine_ready(static_cast<std::size_t>(p.machine_count), 0);
  std::vector<double> work_remaining(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (const auto& op : p.jobs[static_cast<std::size_t>(i)]) {
      work_remaining[static_cast<std::size_t>(i)] += op.duration;
    }
  }
  std::vector<std::vector<double>> start(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    start[static_cast<std::size_t>(i)].resize(p.jobs[static_cast<std::size_t>(i)].size(), 0);
  }
  int remaining = 0;
  for (int i = 0; i < n; ++i) remaining += static_cast<int>(p.jobs[static_cast<std::size_t>(i)].size());

  while (remaining > 0) {
    double sigma = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (next_op[static_cast<std::size_t>(i)] >= p.jobs[static_cast<std::size_t>(i)].size()) continue;
      const auto& op = p.jobs[static_cast<std::size_t>(i)][next_op[static_cast<std::size_t>(i)]];
      const double est = std::max(job_ready[static_cast<std::size_t>(i)],
                                  machine_ready[static_cast<std::size_t>(op.machine)]);
      sigma = std::min(sigma, est);
    }
    int chosen = -1;
    double chosen_key = 0;
    for (int i = 0; i < n; ++i) {
      if (next_op[static_cast<std::size_t>(i)] >= p.jobs[static_cast<std::size_t>(i)].size()) continue;
      const auto& op = p.jobs[static_cast<std::size_t>(i)][next_op[static_cast<std::size_t>(i)]];
      const double est = std::max(job_ready[static_cast<std::size_t>(i)],
                                  machine_ready[static_cast<std::size_t>(op.machine)]);
      if (est > sigma) continue;
      double key = 0;
      switch (priority) {
        case 1: key = op.duration; break;                                   // SPT: min
        case 2: key = -work_remaining[static_cast<std::size_t>(i)]; break;  // MWR: max
        default: key = static_cast<double>(i); break;                       // job order
      }
      if (chosen < 0 || key < chosen_key) {
        chosen = i;
        chosen_key = key;
      }
    }
    const std::size_t j = next_op[static_cast<std::size_t>(chosen)];
    const auto& op = p.jobs[static_cast<std::size_t>(chosen)][j];
    start[static_cast<std::size_t>(chosen)][j] = sigma;
    job_ready[static_cast<std::size_t>(chosen)] = sigma + op.duration;
    machine_ready[static_cast<std::size_t>(op.machine)] = sigma + op.duration;
    work_remaining[static_cast<std::size_t>(chosen)] -= op.duration;
    next_op[static_cast<std::size_t>(chosen)] += 1;
    remaining -= 1;
  }
  return Solution{inst.task, ScheduleSolution{std::move(start)}};
}

}  // namespace detail

Solution dispatch_jsp(const ProblemInstance& inst, DispatchRule rule) {
  return detail::jsp_dispatch(inst, rule == DispatchRule::SPT ? 1 : 2);
}

Solution greedy_assignment(const ProblemInstance& inst) {
  const auto& c = inst.assignment().cost_matrix;
  const int n = inst.size_n;
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  std::vector<int> perm(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (best < 0 ||
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] <
              c[static_cast<std::size_t>(i)][static_cast<std::size_t>(best)]) {
        best = j;
      }
    }
    perm[static_cast<std::size_t>(i)] = best;
    taken[static_cast<std::size_t>(best)] = 1;
  }
  return Solution{inst.task, PermSolution{std::move(perm)}};
}

}  // namespace sgebench
