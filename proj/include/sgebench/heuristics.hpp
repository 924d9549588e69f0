#pragma once

#include "sgebench/problems.hpp"

namespace sgebench {

// Greedy tour construction: from `start`, repeatedly append the nearest
// unvisited city, ties broken by lowest index.
Solution nearest_neighbor(const ProblemInstance& tsp_instance, int start);

// First-improvement 2-opt to a local optimum, deterministic scan order
// (i ascending, then j), restarting after every accepted move. Accepts a TSP
// tour or a VRP routes solution (each route improved independently with the
// depot ends fixed).
Solution two_opt(const ProblemInstance& instance, const Solution& initial);

// Density-ordered greedy (v/w descending, ties by index) with a final
// best-single-item swap, so the result is never worse than the best lone item.
Solution greedy_knapsack(const ProblemInstance& knapsack_instance);

// Take items in index order while they fit. The scripted direct-answer path.
Solution index_greedy_knapsack(const ProblemInstance& knapsack_instance);

// Sort sizes descending (ties by index) and place each item in the first bin
// with room, opening bins as needed.
Solution first_fit_decreasing(const ProblemInstance& binpacking_instance);

// First-fit in the given item order, no sorting.
Solution first_fit(const ProblemInstance& binpacking_instance);

// Angle-sort customers around the depot, cut routes at capacity (residual
// demands), then 2-opt each route.
Solution sweep_vrp(const ProblemInstance& vrp_instance);

// The sweep construction alone, no route improvement.
Solution sweep_vrp_construction(const ProblemInstance& vrp_instance);

enum class DispatchRule { SPT, MWR };

// Non-delay schedule: at each decision point, among ready operations with the
// earliest possible start, pick by Shortest Processing Time or Most Work
// Remaining, ties by job index.
Solution dispatch_jsp(const ProblemInstance& jsp_instance, DispatchRule rule);

// Row-greedy assignment: each worker in order takes the cheapest remaining
// task. The scripted direct-answer path.
Solution greedy_assignment(const ProblemInstance& assignment_instance);

namespace detail {

// Non-delay dispatcher shared by the rules above and the job-order fallback.
// priority: 0 = job order, 1 = SPT, 2 = MWR.
Solution jsp_dispatch(const ProblemInstance& jsp_instance, int priority);

}  // namespace detail

}  // namespace sgebench
