#include "sgebench/prompts.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace sgebench {

std::string fmt_num(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

namespace {

std::string coord(const Point& p) {
  return "(" + fmt_num(p.x) + ", " + fmt_num(p.y) + ")";
}

}  // namespace

std::string answer_contract(TaskKind task) {
  switch (task) {
    case TaskKind::Assignment:
      return "When you are done, reply on a single line formatted as SOLUTION: [t1, t2, ...] "
             "where entry i is the task index assigned to worker i.";
    case TaskKind::Knapsack:
      return "When you are done, reply on a single line formatted as SOLUTION: [i, j, ...] "
             "listing the selected item indices (an empty list [] if no item is packed).";
    case TaskKind::BinPacking:
      return "When you are done, reply on a single line formatted as SOLUTION: [b1, b2, ...] "
             "where entry i is the bin index of item i.";
    case TaskKind::Tsp:
      return "When you are done, reply on a single line formatted as SOLUTION: [c1, c2, ...] "
             "listing every city exactly once in visiting order.";
    case TaskKind::Vrp:
      return "When you are done, reply on a single line formatted as SOLUTION: [[c1, c2], [c3]] "
             "giving one ordered customer list per route.";
    case TaskKind::Jsp:
      return "When you are done, reply on a single line formatted as SOLUTION: "
             "[(job, operation, start), ...] with one triple per operation.";
  }
  return {};
}

namespace {

// Goal sentence plus the exhaustive variable listing, without the contract.
std::string render_problem_body(const ProblemInstance& inst) {
  std::ostringstream os;
  switch (inst.task) {
    case TaskKind::Assignment: {
      const auto& p = inst.assignment();
      os << "Assign each worker to exactly one task and each task to exactly one worker so "
            "that the total assignment cost is minimized.\n";
      for (int i = 0; i < inst.size_n; ++i) {
        os << "Worker " << (i + 1) << " costs:";
        for (int j = 0; j < inst.size_n; ++j) {
          os << " (" << (j + 1) << "): "
             << fmt_num(p.cost_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
             << ";";
        }
        os << "\n";
      }
      break;
    }
    case TaskKind::Knapsack: {
      const auto& p = inst.knapsack();
      os << "Select a subset of the items that maximizes the total value without exceeding "
            "the knapsack capacity.\n";
      for (int i = 0; i < inst.size_n; ++i) {
        os << "Item " << (i + 1) << ": weight " << fmt_num(p.weights[static_cast<std::size_t>(i)])
           << ", value " << fmt_num(p.values[static_cast<std::size_t>(i)]) << ".\n";
      }
      os << "The knapsack capacity is " << fmt_num(p.capacity) << ".\n";
      break;
    }
    case TaskKind::BinPacking: {
      const auto& p = inst.bin_packing();
      os << "Pack all items into as few bins as possible without exceeding the bin capacity.\n";
      for (int i = 0; i < inst.size_n; ++i) {
        os << "Item " << (i + 1) << ": size " << fmt_num(p.sizes[static_cast<std::size_t>(i)])
           << ".\n";
      }
      os << "Each bin has capacity " << fmt_num(p.capacity) << ".\n";
      break;
    }
    case TaskKind::Tsp: {
      const auto& p = inst.tsp();
      os << "Find a route that minimizes the total travel distance, visits each city exactly "
            "once, and starts and ends in the same city.\n";
      os << "You are given a list of points with coordinates: ";
      for (int i = 0; i < inst.size_n; ++i) {
        os << "(" << (i + 1) << "): " << coord(p.cities[static_cast<std::size_t>(i)]) << "; ";
      }
      os << "\n";
      break;
    }
    case TaskKind::Vrp: {
      const auto& p = inst.vrp();
      os << "Find routes for the vehicle fleet that minimize the total travel distance, visit "
            "every customer exactly once, and start and end at the depot.\n";
      os << "The depot is at " << coord(p.depot) << ".\n";
      for (int i = 0; i < inst.size_n; ++i) {
        os << "Customer (" << (i + 1) << "): " << coord(p.customers[static_cast<std::size_t>(i)])
           << " with demand " << fmt_num(p.demands[static_cast<std::size_t>(i)]) << ".\n";
      }
      os << "The fleet has " << p.fleet_size << " vehicles, each with capacity "
         << fmt_num(p.vehicle_capacity) << ".\n";
      break;
    }
    case TaskKind::Jsp: {
      const auto& p = inst.jsp();
      os << "Schedule all jobs on the machines to minimize the makespan. Operations within a "
            "job must run in order, and a machine can process one operation at a time.\n";
      os << "There are " << p.machine_count << " machines.\n";
      for (int i = 0; i < inst.size_n; ++i) {
        os << "Job " << (i + 1) << ":";
        const auto& ops = p.jobs[static_cast<std::size_t>(i)];
        for (std::size_t j = 0; j < ops.size(); ++j) {
          os << " operation " << (j + 1) << " on machine " << (ops[j].machine + 1) << " takes "
             << fmt_num(ops[j].duration) << ";";
        }
        os << "\n";
      }
      break;
    }
  }
  return os.str();
}

}  // namespace

std::string render_problem(const ProblemInstance& inst) {
  return render_problem_body(inst) + answer_contract(inst.task);
}

PromptBundle make_prompt_bundle(const ProblemInstance& inst) {
  return PromptBundle{render_problem_body(inst), answer_contract(inst.task)};
}

}  // namespace sgebench
