#include "sgebench/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sgebench {

namespace {

constexpr double kEps = 1e-9;

std::string fmt(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream os;
  os << v;
  return os.str();
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0; }

void require(bool cond, const std::string& field, const std::string& what) {
  if (!cond) throw std::invalid_argument(field + ": " + what);
}

bool is_permutation_of_iota(const std::vector<int>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : p) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

// Sorted-order summation: the result depends only on the multiset of legs.
double sum_sorted(std::vector<double> legs) {
  std::sort(legs.begin(), legs.end());
  double total = 0;
  for (double d : legs) total += d;
  return total;
}

}  // namespace

const char* task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::Assignment: return "assignment";
    case TaskKind::Knapsack: return "knapsack";
    case TaskKind::BinPacking: return "binpacking";
    case TaskKind::Tsp: return "tsp";
    case TaskKind::Vrp: return "vrp";
    case TaskKind::Jsp: return "jsp";
  }
  return "unknown";
}

TaskKind task_from_name(const std::string& name) {
  for (TaskKind k : kAllTasks) {
    if (name == task_name(k)) return k;
  }
  throw std::invalid_argument("unknown task kind: " + name);
}

Sense task_sense(TaskKind kind) {
  return kind == TaskKind::Knapsack ? Sense::Maximize : Sense::Minimize;
}

double euclid(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool cost_better(double a, double b, Sense sense) {
  return sense == Sense::Minimize ? a < b : a > b;
}

#define SGEBENCH_PAYLOAD_ACCESSOR(METHOD, TYPE)                                    \
  const TYPE& ProblemInstance::METHOD() const {                                    \
    const auto* p = std::get_if<TYPE>(&payload);                                   \
    if (!p) throw std::invalid_argument("instance payload is not " #TYPE);         \
    return *p;                                                                     \
  }

SGEBENCH_PAYLOAD_ACCESSOR(assignment, AssignmentPayload)
SGEBENCH_PAYLOAD_ACCESSOR(knapsack, KnapsackPayload)
SGEBENCH_PAYLOAD_ACCESSOR(bin_packing, BinPackingPayload)
SGEBENCH_PAYLOAD_ACCESSOR(tsp, TspPayload)
SGEBENCH_PAYLOAD_ACCESSOR(vrp, VrpPayload)
SGEBENCH_PAYLOAD_ACCESSOR(jsp, JspPayload)
#undef SGEBENCH_PAYLOAD_ACCESSOR

#define SGEBENCH_ENCODING_ACCESSOR(METHOD, TYPE)                                   \
  const TYPE& Solution::METHOD() const {                                           \
    const auto* p = std::get_if<TYPE>(&encoding);                                  \
    if (!p) throw std::invalid_argument("solution encoding is not " #TYPE);        \
    return *p;                                                                     \
  }

SGEBENCH_ENCODING_ACCESSOR(perm, PermSolution)
SGEBENCH_ENCODING_ACCESSOR(selection, SelectionSolution)
SGEBENCH_ENCODING_ACCESSOR(bins, BinSolution)
SGEBENCH_ENCODING_ACCESSOR(routes, RoutesSolution)
SGEBENCH_ENCODING_ACCESSOR(schedule, ScheduleSolution)
#undef SGEBENCH_ENCODING_ACCESSOR

void check_instance(const ProblemInstance& inst) {
  const int n = inst.size_n;
  require(n >= 1, "size_n", "must be >= 1");
  switch (inst.task) {
    case TaskKind::Assignment: {
      const auto& p = inst.assignment();
      require(static_cast<int>(p.cost_matrix.size()) == n, "cost_matrix", "must have size_n rows");
      for (int i = 0; i < n; ++i) {
        require(static_cast<int>(p.cost_matrix[i].size()) == n,
                "cost_matrix[" + std::to_string(i) + "]", "must have size_n columns");
        for (int j = 0; j < n; ++j) {
          require(positive_finite(p.cost_matrix[i][j]),
                  "cost_matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]",
                  "must be strictly positive and finite");
        }
      }
      break;
    }
    case TaskKind::Knapsack: {
      const auto& p = inst.knapsack();
      require(static_cast<int>(p.weights.size()) == n, "weights", "must have size_n entries");
      require(static_cast<int>(p.values.size()) == n, "values", "must have size_n entries");
      double max_w = 0;
      for (int i = 0; i < n; ++i) {
        require(positive_finite(p.weights[i]), "weights[" + std::to_string(i) + "]",
                "must be strictly positive and finite");
        require(positive_finite(p.values[i]), "values[" + std::to_string(i) + "]",
                "must be strictly positive and finite");
        max_w = std::max(max_w, p.weights[i]);
      }
      require(positive_finite(p.capacity), "capacity", "must be strictly positive and finite");
      require(p.capacity >= max_w, "capacity", "must be >= max item weight");
      break;
    }
    case TaskKind::BinPacking: {
      const auto& p = inst.bin_packing();
      require(static_cast<int>(p.sizes.size()) == n, "sizes", "must have size_n entries");
      double max_w = 0;
      for (int i = 0; i < n; ++i) {
        require(positive_finite(p.sizes[i]), "sizes[" + std::to_string(i) + "]",
                "must be strictly positive and finite");
        max_w = std::max(max_w, p.sizes[i]);
      }
      require(positive_finite(p.capacity), "capacity", "must be strictly positive and finite");
      require(p.capacity >= max_w, "capacity", "must be >= max item size");
      break;
    }
    case TaskKind::Tsp: {
      const auto& p = inst.tsp();
      require(static_cast<int>(p.cities.size()) == n, "cities", "must have size_n entries");
      for (int i = 0; i < n; ++i) {
        const auto& c = p.cities[i];
        require(std::isfinite(c.x) && std::isfinite(c.y) && c.x >= 0 && c.x <= 100 && c.y >= 0 &&
                    c.y <= 100,
                "cities[" + std::to_string(i) + "]", "coordinates must lie in [0,100]^2");
      }
      break;
    }
    case TaskKind::Vrp: {
      const auto& p = inst.vrp();
      require(static_cast<int>(p.customers.size()) == n, "customers", "must have size_n entries");
      require(static_cast<int>(p.demands.size()) == n, "demands", "must have size_n entries");
      auto in_box = [](const Point& pt) {
        return std::isfinite(pt.x) && std::isfinite(pt.y) && pt.x >= 0 && pt.x <= 100 &&
               pt.y >= 0 && pt.y <= 100;
      };
      require(in_box(p.depot), "depot", "coordinates must lie in [0,100]^2");
      for (int i = 0; i < n; ++i) {
        require(in_box(p.customers[i]), "customers[" + std::to_string(i) + "]",
                "coordinates must lie in [0,100]^2");
        require(positive_finite(p.demands[i]), "demands[" + std::to_string(i) + "]",
                "must be strictly positive and finite");
      }
      require(p.fleet_size >= 1, "fleet_size", "must be >= 1");
      require(positive_finite(p.vehicle_capacity), "vehicle_capacity",
              "must be strictly positive and finite");
      break;
    }
    case TaskKind::Jsp: {
      const auto& p = inst.jsp();
      require(p.machine_count >= 1, "machine_count", "must be >= 1");
      require(static_cast<int>(p.jobs.size()) == n, "jobs", "must have size_n entries");
      for (int i = 0; i < n; ++i) {
        const auto& ops = p.jobs[i];
        require(static_cast<int>(ops.size()) == p.machine_count, "jobs[" + std::to_string(i) + "]",
                "must have machine_count operations");
        std::vector<int> machines;
        for (std::size_t j = 0; j < ops.size(); ++j) {
          require(positive_finite(ops[j].duration),
                  "jobs[" + std::to_string(i) + "][" + std::to_string(j) + "].time",
                  "must be strictly positive and finite");
          machines.push_back(ops[j].machine);
        }
        require(is_permutation_of_iota(machines, p.machine_count),
                "jobs[" + std::to_string(i) + "]",
                "machine ids must form a permutation of 0..m-1");
      }
      break;
    }
  }
}

double vrp_residual_demand(double demand, double capacity) {
  const double trips = std::floor(demand / capacity);
  double residual = demand - trips * capacity;
  if (residual < kEps) residual = 0;
  return residual;
}

namespace {

void validate_assignment(const ProblemInstance& inst, const Solution& sol, ValidationResult& out) {
  if (!is_permutation_of_iota(sol.perm().perm, inst.size_n)) {
    out.violations.push_back("assignment must be a permutation of 0.." +
                             std::to_string(inst.size_n - 1));
  }
}

void validate_tsp(const ProblemInstance& inst, const Solution& sol, ValidationResult& out) {
  if (!is_permutation_of_iota(sol.perm().perm, inst.size_n)) {
    out.violations.push_back("tour must visit each of the " + std::to_string(inst.size_n) +
                             " cities exactly once");
  }
}

void validate_knapsack(const ProblemInstance& inst, const Solution& sol, ValidationResult& out) {
  const auto& p = inst.knapsack();
  const auto& items = sol.selection().items;
  std::vector<char> seen(static_cast<std::size_t>(inst.size_n), 0);
  double total = 0;
  for (int i : items) {
    if (i < 0 || i >= inst.size_n) {
      out.violations.push_back("item index " + std::to_string(i) + " out of range");
      continue;
    }
    if (seen[static_cast<std::size_t>(i)]) {
      out.violations.push_back("item " + std::to_string(i) + " selected twice");
      continue;
    }
    seen[static_cast<std::size_t>(i)] = 1;
    total += p.weights[static_cast<std::size_t>(i)];
  }
  if (total > p.capacity + kEps) {
    out.violations.push_back("capacity exceeded by " + fmt(total - p.capacity));
  }
}

void validate_binpacking(const ProblemInstance& inst, const Solution& sol,
                         ValidationResult& out) {
  const auto& p = inst.bin_packing();
  const auto& bin_of = sol.bins().bin_of;
  if (static_cast<int>(bin_of.size()) != inst.size_n) {
    out.violations.push_back("bin assignment must cover all " + std::to_string(inst.size_n) +
                             " items");
    return;
  }
  int max_bin = -1;
  for (int b : bin_of) {
    if (b < 0) {
      out.violations.push_back("negative bin index " + std::to_string(b));
      return;
    }
    max_bin = std::max(max_bin, b);
  }
  std::vector<double> load(static_cast<std::size_t>(max_bin) + 1, 0);
  std::vector<char> used(static_cast<std::size_t>(max_bin) + 1, 0);
  for (int i = 0; i < inst.size_n; ++i) {
    load[static_cast<std::size_t>(bin_of[i])] += p.sizes[static_cast<std::size_t>(i)];
    used[static_cast<std::size_t>(bin_of[i])] = 1;
  }
  for (int b = 0; b <= max_bin; ++b) {
    if (!used[static_cast<std::size_t>(b)]) {
      out.violations.push_back("bin indices not contiguous: bin " + std::to_string(b) +
                               " is empty");
    } else if (load[static_cast<std::size_t>(b)] > p.capacity + kEps) {
      out.violations.push_back("bin " + std::to_string(b) + " over capacity by " +
                               fmt(load[static_cast<std::size_t>(b)] - p.capacity));
    }
  }
}

void validate_vrp(const ProblemInstance& inst, const Solution& sol, ValidationResult& out) {
  const auto& p = inst.vrp();
  const auto& routes = sol.routes().routes;
  if (static_cast<int>(routes.size()) > p.fleet_size) {
    out.violations.push_back("route count " + std::to_string(routes.size()) +
                             " exceeds fleet size " + std::to_string(p.fleet_size));
  }
  std::vector<int> visits(static_cast<std::size_t>(inst.size_n), 0);
  for (std::size_t r = 0; r < routes.size(); ++r) {
    if (routes[r].empty()) {
      out.violations.push_back("route " + std::to_string(r) + " is empty");
      continue;
    }
    double load = 0;
    for (int c : routes[r]) {
      if (c < 0 || c >= inst.size_n) {
        out.violations.push_back("customer index " + std::to_string(c) + " out of range");
        continue;
      }
      visits[static_cast<std::size_t>(c)] += 1;
      load += vrp_residual_demand(p.demands[static_cast<std::size_t>(c)], p.vehicle_capacity);
    }
    if (load > p.vehicle_capacity + kEps) {
      out.violations.push_back("route " + std::to_string(r) + " over capacity by " +
                               fmt(load - p.vehicle_capacity));
    }
  }
  for (int c = 0; c < inst.size_n; ++c) {
    if (visits[static_cast<std::size_t>(c)] != 1) {
      out.violations.push_back("customer " + std::to_string(c) + " visited " +
                               std::to_string(visits[static_cast<std::size_t>(c)]) +
                               " times (expected 1)");
    }
  }
}

void validate_jsp(const ProblemInstance& inst, const Solution& sol, ValidationResult& out) {
  const auto& p = inst.jsp();
  const auto& start = sol.schedule().start;
  if (static_cast<int>(start.size()) != inst.size_n) {
    out.violations.push_back("schedule must cover all " + std::to_string(inst.size_n) + " jobs");
    return;
  }
  struct Interval {
    double begin, end;
    int job, op;
  };
  std::vector<std::vector<Interval>> per_machine(static_cast<std::size_t>(p.machine_count));
  for (int i = 0; i < inst.size_n; ++i) {
    const auto& ops = p.jobs[static_cast<std::size_t>(i)];
    if (start[static_cast<std::size_t>(i)].size() != ops.size()) {
      out.violations.push_back("job " + std::to_string(i) + " start times must cover " +
                               std::to_string(ops.size()) + " operations");
      return;
    }
    for (std::size_t j = 0; j < ops.size(); ++j) {
      const double s = start[static_cast<std::size_t>(i)][j];
      if (!std::isfinite(s) || s < -kEps) {
        out.violations.push_back("job " + std::to_string(i) + " op " + std::to_string(j) +
                                 " start must be a finite nonnegative time");
        continue;
      }
      if (j > 0) {
        const double prev_end =
            start[static_cast<std::size_t>(i)][j - 1] + ops[j - 1].duration;
        if (s < prev_end - kEps) {
          out.violations.push_back("job " + std::to_string(i) + " op " + std::to_string(j) +
                                   " starts before op " + std::to_string(j - 1) + " finishes");
        }
      }
      per_machine[static_cast<std::size_t>(ops[j].machine)].push_back(
          {s, s + ops[j].duration, i, static_cast<int>(j)});
    }
  }
  for (int m = 0; m < p.machine_count; ++m) {
    auto& ivs = per_machine[static_cast<std::size_t>(m)];
    std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) {
      return a.begin < b.begin || (a.begin == b.begin && a.end < b.end);
    });
    for (std::size_t k = 1; k < ivs.size(); ++k) {
      if (ivs[k].begin < ivs[k - 1].end - kEps) {
        out.violations.push_back("machine " + std::to_string(m) + " overlap between (job " +
                                 std::to_string(ivs[k - 1].job) + ", op " +
                                 std::to_string(ivs[k - 1].op) + ") and (job " +
                                 std::to_string(ivs[k].job) + ", op " +
                                 std::to_string(ivs[k].op) + ")");
      }
    }
  }
}

}  // namespace

ValidationResult validate(const ProblemInstance& inst, const Solution& sol) {
  if (inst.task != sol.task) {
    throw std::invalid_argument(std::string("task kind mismatch: instance is ") +
                                task_name(inst.task) + ", solution is " + task_name(sol.task));
  }
  ValidationResult result;
  switch (inst.task) {
    case TaskKind::Assignment: validate_assignment(inst, sol, result); break;
    case TaskKind::Knapsack: validate_knapsack(inst, sol, result); break;
    case TaskKind::BinPacking: validate_binpacking(inst, sol, result); break;
    case TaskKind::Tsp: validate_tsp(inst, sol, result); break;
    case TaskKind::Vrp: validate_vrp(inst, sol, result); break;
    case TaskKind::Jsp: validate_jsp(inst, sol, result); break;
  }
  result.ok = result.violations.empty();
  return result;
}

namespace {

double route_leg_sum(const VrpPayload& p, const std::vector<std::vector<int>>& routes) {
  std::vector<double> legs;
  for (const auto& route : routes) {
    const Point* prev = &p.depot;
    for (int c : route) {
      legs.push_back(euclid(*prev, p.customers[static_cast<std::size_t>(c)]));
      prev = &p.customers[static_cast<std::size_t>(c)];
    }
    legs.push_back(euclid(*prev, p.depot));
  }
  return sum_sorted(std::move(legs));
}

}  // namespace

Cost evaluate(const ProblemInstance& inst, const Solution& sol) {
  const ValidationResult check = validate(inst, sol);
  if (!check.ok) {
    throw std::invalid_argument("evaluate refused an invalid solution: " + check.violations[0]);
  }
  Cost cost;
  cost.sense = task_sense(inst.task);
  switch (inst.task) {
    case TaskKind::Assignment: {
      const auto& c = inst.assignment().cost_matrix;
      const auto& perm = sol.perm().perm;
      double total = 0;
      for (int i = 0; i < inst.size_n; ++i) {
        total += c[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[i])];
      }
      cost.value = total;
      break;
    }
    case TaskKind::Knapsack: {
      const auto& p = inst.knapsack();
      double total = 0;
      for (int i : sol.selection().items) total += p.values[static_cast<std::size_t>(i)];
      cost.value = total;
      break;
    }
    case TaskKind::BinPacking: {
      const auto& bin_of = sol.bins().bin_of;
      int max_bin = -1;
      for (int b : bin_of) max_bin = std::max(max_bin, b);
      cost.value = static_cast<double>(max_bin + 1);
      break;
    }
    case TaskKind::Tsp: {
      const auto& cities = inst.tsp().cities;
      const auto& tour = sol.perm().perm;
      std::vector<double> legs;
      for (std::size_t k = 0; k < tour.size(); ++k) {
        const auto& a = cities[static_cast<std::size_t>(tour[k])];
        const auto& b = cities[static_cast<std::size_t>(tour[(k + 1) % tour.size()])];
        legs.push_back(euclid(a, b));
      }
      cost.value = sum_sorted(std::move(legs));
      break;
    }
    case TaskKind::Vrp: {
      cost.value = route_leg_sum(inst.vrp(), sol.routes().routes);
      break;
    }
    case TaskKind::Jsp: {
      const auto& p = inst.jsp();
      const auto& start = sol.schedule().start;
      double makespan = 0;
      for (int i = 0; i < inst.size_n; ++i) {
        for (std::size_t j = 0; j < p.jobs[static_cast<std::size_t>(i)].size(); ++j) {
          makespan = std::max(makespan, start[static_cast<std::size_t>(i)][j] +
                                            p.jobs[static_cast<std::size_t>(i)][j].duration);
        }
      }
      cost.value = makespan;
      break;
    }
  }
  return cost;
}

Cost evaluate_with_shuttle(const ProblemInstance& inst, const Solution& sol) {
  if (inst.task != TaskKind::Vrp) {
    throw std::invalid_argument("evaluate_with_shuttle applies to vrp instances only");
  }
  Cost cost = evaluate(inst, sol);
  const auto& p = inst.vrp();
  for (int i = 0; i < inst.size_n; ++i) {
    const double q = p.demands[static_cast<std::size_t>(i)];
    const double trips = std::floor(q / p.vehicle_capacity);
    if (trips > 0) {
      cost.value += 2.0 * trips * euclid(p.depot, p.customers[static_cast<std::size_t>(i)]);
    }
  }
  return cost;
}

Cost benchmark_cost(const ProblemInstance& inst, const Solution& sol) {
  return inst.task == TaskKind::Vrp ? evaluate_with_shuttle(inst, sol) : evaluate(inst, sol);
}

}  // namespace sgebench
