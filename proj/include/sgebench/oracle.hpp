#pragma once

#include "sgebench/problems.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sgebench {

// Per-task tractability bounds for exhaustive solving. Assignment and Knapsack
// fall back to Hungarian / DP beyond the enumeration bound, so they stay exact
// at any size.
struct OracleBounds {
  int assignment_enum_max_n = 10;
  int knapsack_enum_max_n = 20;
  int tsp_max_n = 10;
  int binpacking_max_n = 10;
  int vrp_max_n = 8;
  int jsp_max_ops = 9;
};

struct OracleResult {
  double optimal_cost = 0;
  Solution optimal_solution;
  std::uint64_t explored = 0;  // candidates / search nodes examined
  double elapsed_seconds = 0;
};

// Raised when an instance exceeds the bounds; never answered heuristically.
class OracleBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool oracle_tractable(const ProblemInstance& instance, const OracleBounds& bounds = {});

// Globally optimal solution with a deterministic tie-break: among enumerated
// optima, the lexicographically smallest encoding wins.
OracleResult solve_exact(const ProblemInstance& instance, const OracleBounds& bounds = {});

// O(n^3) Hungarian algorithm on a square cost matrix. Returns the
// worker->task permutation and its total cost.
std::pair<std::vector<int>, double> hungarian(const std::vector<std::vector<double>>& cost);

// Exact 0/1 knapsack DP over integer weights. Returns the selected indices
// (ascending, lexicographically smallest among optima) and the total value.
// Refuses non-integer weights.
std::pair<std::vector<int>, double> knapsack_dp(const std::vector<double>& weights,
                                                const std::vector<double>& values,
                                                double capacity);

}  // namespace sgebench
