#include "sgebench/heuristics.hpp"
#include "sgebench/problems.hpp"

#include <numeric>
#include <stdexcept>

namespace sgebench {

Solution canonical_fallback(const ProblemInstance& inst) {
  switch (inst.task) {
    case TaskKind::Assignment:
    case TaskKind::Tsp: {
      std::vector<int> identity(static_cast<std::size_t>(inst.size_n));
      std::iota(identity.begin(), identity.end(), 0);
      return Solution{inst.task, PermSolution{std::move(identity)}};
    }
    case TaskKind::Knapsack:
      return Solution{inst.task, SelectionSolution{{}}};
    case TaskKind::BinPacking: {
      std::vector<int> bin_of(static_cast<std::size_t>(inst.size_n));
      std::iota(bin_of.begin(), bin_of.end(), 0);
      return Solution{inst.task, BinSolution{std::move(bin_of)}};
    }
    case TaskKind::Vrp: {
      // Concatenate single-customer routes in index order, cutting at capacity.
      const auto& p = inst.vrp();
      std::vector<std::vector<int>> routes;
      double load = 0;
      for (int c = 0; c < inst.size_n; ++c) {
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
    case TaskKind::Jsp:
      return detail::jsp_dispatch(inst, 0);  // non-delay, job-order priority
  }
  throw std::invalid_argument("canonical_fallback: unknown task kind");
}

}  // namespace sgebench
