#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace sgebench {

enum class TaskKind { Assignment, Knapsack, BinPacking, Tsp, Vrp, Jsp };
enum class Sense { Minimize, Maximize };

inline constexpr TaskKind kAllTasks[] = {
    TaskKind::Assignment, TaskKind::Knapsack, TaskKind::BinPacking,
    TaskKind::Tsp,        TaskKind::Vrp,      TaskKind::Jsp};

const char* task_name(TaskKind kind);                  // "assignment", "knapsack", ...
TaskKind task_from_name(const std::string& name);      // throws std::invalid_argument
Sense task_sense(TaskKind kind);                       // Maximize only for Knapsack

struct Point {
  double x = 0;
  double y = 0;
};

double euclid(const Point& a, const Point& b);

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

struct AssignmentPayload {
  std::vector<std::vector<double>> cost_matrix;  // n x n, worker i / task j
};

struct KnapsackPayload {
  std::vector<double> weights;
  std::vector<double> values;
  double capacity = 0;
};

struct BinPackingPayload {
  std::vector<double> sizes;
  double capacity = 0;
};

struct TspPayload {
  std::vector<Point> cities;
};

struct VrpPayload {
  Point depot;
  std::vector<Point> customers;
  std::vector<double> demands;
  int fleet_size = 0;
  double vehicle_capacity = 0;
};

struct JspOperation {
  int machine = 0;
  double duration = 0;
};

struct JspPayload {
  int machine_count = 0;
  std::vector<std::vector<JspOperation>> jobs;  // jobs[i][j] = j-th operation of job i
};

using InstancePayload = std::variant<AssignmentPayload, KnapsackPayload, BinPackingPayload,
                                     TspPayload, VrpPayload, JspPayload>;

struct ProblemInstance {
  TaskKind task = TaskKind::Assignment;
  int size_n = 0;
  std::string instance_id;
  std::uint64_t seed = 0;
  InstancePayload payload;

  const AssignmentPayload& assignment() const;
  const KnapsackPayload& knapsack() const;
  const BinPackingPayload& bin_packing() const;
  const TspPayload& tsp() const;
  const VrpPayload& vrp() const;
  const JspPayload& jsp() const;
};

// Structural invariants: positive finite numbers, square matrix, coordinates
// in [0,100]^2, machine ids a permutation per job, capacity >= max item.
// Throws std::invalid_argument naming the offending field.
void check_instance(const ProblemInstance& instance);

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

struct PermSolution {
  std::vector<int> perm;  // Assignment: worker i -> task perm[i]; TSP: visit order
};

struct SelectionSolution {
  std::vector<int> items;  // ascending item indices
};

struct BinSolution {
  std::vector<int> bin_of;  // item i -> bin index, bins contiguous from 0
};

struct RoutesSolution {
  std::vector<std::vector<int>> routes;  // ordered customer lists
};

struct ScheduleSolution {
  std::vector<std::vector<double>> start;  // start[i][j] of operation j of job i
};

using SolutionEncoding =
    std::variant<PermSolution, SelectionSolution, BinSolution, RoutesSolution, ScheduleSolution>;

struct Solution {
  TaskKind task = TaskKind::Assignment;
  SolutionEncoding encoding;

  const PermSolution& perm() const;
  const SelectionSolution& selection() const;
  const BinSolution& bins() const;
  const RoutesSolution& routes() const;
  const ScheduleSolution& schedule() const;
};

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> violations;
};

struct Cost {
  double value = 0;
  Sense sense = Sense::Minimize;
};

// True if `a` is at least as good as `b` under `sense`, strictly better, ...
bool cost_better(double a, double b, Sense sense);

// Checks every constraint of the task formulation; task mismatch between
// instance and solution is a contract error (std::invalid_argument).
ValidationResult validate(const ProblemInstance& instance, const Solution& solution);

// Objective value g(x). Refuses invalid solutions with std::invalid_argument.
// TSP/VRP leg lengths are summed in sorted order, so the cost is bit-identical
// under tour rotation/reversal and route reordering.
Cost evaluate(const ProblemInstance& instance, const Solution& solution);

// VRP objective with shuttle legs: a customer whose demand q exceeds the
// vehicle capacity P is served by 2*floor(q/P) depot round trips plus an
// in-route visit carrying the residual q mod P.
Cost evaluate_with_shuttle(const ProblemInstance& instance, const Solution& solution);

// The costing path used by benchmarks and reports: shuttle-aware for VRP,
// plain evaluate for everything else.
Cost benchmark_cost(const ProblemInstance& instance, const Solution& solution);

// Guaranteed-feasible default used when parsing fails: identity permutation,
// empty selection, singleton bins, capacity-cut routes, job-order schedule.
Solution canonical_fallback(const ProblemInstance& instance);

// In-route demand once shuttle round trips are peeled off.
double vrp_residual_demand(double demand, double capacity);

}  // namespace sgebench
