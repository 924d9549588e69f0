#pragma once

#include "sgebench/problems.hpp"

#include <string>
#include <vector>

namespace sgebench::testutil {

inline ProblemInstance make_assignment(std::vector<std::vector<double>> cost) {
  ProblemInstance inst;
  inst.task = TaskKind::Assignment;
  inst.size_n = static_cast<int>(cost.size());
  inst.instance_id = "test-assignment";
  inst.payload = AssignmentPayload{std::move(cost)};
  return inst;
}

inline ProblemInstance make_knapsack(std::vector<double> w, std::vector<double> v, double cap) {
  ProblemInstance inst;
  inst.task = TaskKind::Knapsack;
  inst.size_n = static_cast<int>(w.size());
  inst.instance_id = "test-knapsack";
  inst.payload = KnapsackPayload{std::move(w), std::move(v), cap};
  return inst;
}

inline ProblemInstance make_binpacking(std::vector<double> sizes, double cap) {
  ProblemInstance inst;
  inst.task = TaskKind::BinPacking;
  inst.size_n = static_cast<int>(sizes.size());
  inst.instance_id = "test-binpacking";
  inst.payload = BinPackingPayload{std::move(sizes), cap};
  return inst;
}

inline ProblemInstance make_tsp(std::vector<Point> cities) {
  ProblemInstance inst;
  inst.task = TaskKind::Tsp;
  inst.size_n = static_cast<int>(cities.size());
  inst.instance_id = "test-tsp";
  inst.payload = TspPayload{std::move(cities)};
  return inst;
}

inline ProblemInstance make_vrp(Point depot, std::vector<Point> customers,
                                std::vector<double> demands, int fleet, double capacity) {
  ProblemInstance inst;
  inst.task = TaskKind::Vrp;
  inst.size_n = static_cast<int>(customers.size());
  inst.instance_id = "test-vrp";
  inst.payload = VrpPayload{depot, std::move(customers), std::move(demands), fleet, capacity};
  return inst;
}

inline ProblemInstance make_jsp(int machines, std::vector<std::vector<JspOperation>> jobs) {
  ProblemInstance inst;
  inst.task = TaskKind::Jsp;
  inst.size_n = static_cast<int>(jobs.size());
  inst.instance_id = "test-jsp";
  inst.payload = JspPayload{machines, std::move(jobs)};
  return inst;
}

inline Solution perm_solution(TaskKind task, std::vector<int> perm) {
  return Solution{task, PermSolution{std::move(perm)}};
}

}  // namespace sgebench::testutil
