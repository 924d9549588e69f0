#include "sgebench/oracle.hpp"

#include "sgebench/heuristics.hpp"
#include "sgebench/instance_gen.hpp"
#include "sgebench/rng.hpp"
#include "sgebench/strategies.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_util.hpp"

using namespace sgebench;
using namespace sgebench::testutil;

namespace {

std::vector<std::vector<double>> random_matrix(SplitMix64& rng, int n) {
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : m) {
    for (double& v : row) v = static_cast<double>(rng.uniform_int(1, 100));
  }
  return m;
}

double brute_force_assignment(const std::vector<std::vector<double>>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double total = 0;
    for (int i = 0; i < n; ++i) total += c[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("hungarian on the 2x2 example and a zero diagonal") {
  auto [perm, cost] = hungarian({{4, 1}, {2, 3}});
  CHECK(perm == std::vector<int>{1, 0});
  CHECK(cost == doctest::Approx(3.0));

  auto [id_perm, zero] = hungarian({{0, 9, 9}, {9, 0, 9}, {9, 9, 0}});
  CHECK(id_perm == std::vector<int>{0, 1, 2});
  CHECK(zero == doctest::Approx(0.0));

  CHECK_THROWS_AS(hungarian({{1, 2}, {3}}), std::invalid_argument);
}

TEST_CASE("hungarian equals permutation brute force on random 7x7 matrices") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_matrix(rng, 7);
    auto [perm, cost] = hungarian(m);
    CHECK(cost == doctest::Approx(brute_force_assignment(m)));
  }
}

TEST_CASE("hungarian permutation is invariant under column-constant shifts") {
  SplitMix64 rng(405);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = random_matrix(rng, 6);
    auto [perm, cost] = hungarian(m);
    auto shifted = m;
    for (int j = 0; j < 6; ++j) {
      const double delta = static_cast<double>(rng.uniform_int(1, 50));
      for (int i = 0; i < 6; ++i) shifted[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += delta;
    }
    auto [shifted_perm, shifted_cost] = hungarian(shifted);
    CHECK(perm == shifted_perm);
  }
}

TEST_CASE("knapsack_dp basics") {
  auto [sel, value] = knapsack_dp({2, 3}, {3, 4}, 5);
  CHECK(sel == std::vector<int>{0, 1});
  CHECK(value == doctest::Approx(7.0));

  auto [none, zero] = knapsack_dp({2, 3}, {3, 4}, 0);
  CHECK(none.empty());
  CHECK(zero == doctest::Approx(0.0));

  CHECK_THROWS_AS(knapsack_dp({2.5, 3}, {3, 4}, 5), std::invalid_argument);
}

TEST_CASE("knapsack_dp equals subset enumeration on random n=12 instances") {
  GenSpec spec;
  spec.task = TaskKind::Knapsack;
  spec.size_n = 12;
  spec.count = 30;
  spec.master_seed = 31;
  OracleBounds enum_only;
  enum_only.knapsack_enum_max_n = 20;
  for (const auto& inst : generate(spec).instances) {
    const auto& p = inst.knapsack();
    auto [sel, value] = knapsack_dp(p.weights, p.values, p.capacity);
    const OracleResult res = solve_exact(inst, enum_only);
    CHECK(value == doctest::Approx(res.optimal_cost));
    CHECK(sel == res.optimal_solution.selection().items);
  }
}

TEST_CASE("solve_exact examples") {
  const auto assign = make_assignment({{4, 1}, {2, 3}});
  const OracleResult ar = solve_exact(assign);
  CHECK(ar.optimal_cost == doctest::Approx(3.0));
  CHECK(ar.optimal_solution.perm().perm == std::vector<int>{1, 0});

  const auto knap = make_knapsack({2, 3, 4}, {3, 4, 5}, 5);
  const OracleResult kr = solve_exact(knap);
  CHECK(kr.optimal_cost == doctest::Approx(7.0));
  CHECK(kr.optimal_solution.selection().items == std::vector<int>{0, 1});

  const auto triangle = make_tsp({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
  const OracleResult tr = solve_exact(triangle);
  CHECK(tr.optimal_cost == doctest::Approx(3.0));
}

TEST_CASE("solve_exact is deterministic including tie-breaks") {
  // Symmetric costs make every assignment optimal; the lex-smallest wins.
  const auto flat = make_assignment({{5, 5, 5}, {5, 5, 5}, {5, 5, 5}});
  CHECK(solve_exact(flat).optimal_solution.perm().perm == std::vector<int>{0, 1, 2});

  GenSpec spec;
  spec.task = TaskKind::Vrp;
  spec.size_n = 6;
  spec.count = 5;
  spec.master_seed = 8;
  for (const auto& inst : generate(spec).instances) {
    const OracleResult a = solve_exact(inst);
    const OracleResult b = solve_exact(inst);
    CHECK(a.optimal_cost == b.optimal_cost);
    CHECK(encode_solution(a.optimal_solution) == encode_solution(b.optimal_solution));
  }
}

TEST_CASE("oracle refuses instances beyond its bounds") {
  GenSpec spec;
  spec.task = TaskKind::Tsp;
  spec.size_n = 11;
  spec.count = 1;
  spec.master_seed = 1;
  const auto inst = generate(spec).instances[0];
  CHECK_FALSE(oracle_tractable(inst));
  CHECK_THROWS_AS(solve_exact(inst), OracleBoundError);

  spec.task = TaskKind::Assignment;
  spec.size_n = 12;
  const auto big_assign = generate(spec).instances[0];
  CHECK(oracle_tractable(big_assign));  // Hungarian path
  const OracleResult res = solve_exact(big_assign);
  CHECK(validate(big_assign, res.optimal_solution).ok);
}

TEST_CASE("vrp oracle on a hand-checked line instance") {
  const auto inst = make_vrp({0, 0}, {{1, 0}, {2, 0}}, {5, 5}, 2, 40);
  const OracleResult res = solve_exact(inst);
  CHECK(res.optimal_cost == doctest::Approx(4.0));
  CHECK(validate(inst, res.optimal_solution).ok);
}

TEST_CASE("jsp oracle on the 2x2 example") {
  const auto inst = make_jsp(2, {{{0, 5}, {1, 5}}, {{1, 3}, {0, 5}}});
  const OracleResult res = solve_exact(inst);
  // Machine 0 carries 10 time units of load; the bound is attained.
  CHECK(res.optimal_cost == doctest::Approx(10.0));
  CHECK(validate(inst, res.optimal_solution).ok);
  CHECK(evaluate(inst, res.optimal_solution).value == doctest::Approx(res.optimal_cost));
}

TEST_CASE("binpacking oracle: lex-smallest optimum, singleton lower bound") {
  const auto inst = make_binpacking({5, 4, 3, 3, 2, 2}, 10);
  const OracleResult res = solve_exact(inst);
  CHECK(res.optimal_cost == doctest::Approx(2.0));
  CHECK(validate(inst, res.optimal_solution).ok);
  // First item always lands in bin 0 under the restricted-growth order.
  CHECK(res.optimal_solution.bins().bin_of[0] == 0);
}

TEST_CASE("no heuristic beats the oracle on seeded instances") {
  GenSpec spec;
  spec.master_seed = 777;
  spec.count = 30;
  const OracleBounds bounds;

  auto check_not_better = [&](const ProblemInstance& inst, const Solution& sol) {
    const OracleResult res = solve_exact(inst, bounds);
    const double h = benchmark_cost(inst, sol).value;
    if (task_sense(inst.task) == Sense::Minimize) {
      CHECK(h >= res.optimal_cost - 1e-9);
    } else {
      CHECK(h <= res.optimal_cost + 1e-9);
    }
  };

  spec.task = TaskKind::Tsp;
  spec.size_n = 7;
  for (const auto& inst : generate(spec).instances) {
    check_not_better(inst, two_opt(inst, nearest_neighbor(inst, 0)));
  }
  spec.task = TaskKind::Assignment;
  spec.size_n = 6;
  for (const auto& inst : generate(spec).instances) {
    check_not_better(inst, greedy_assignment(inst));
  }
  spec.task = TaskKind::Knapsack;
  spec.size_n = 10;
  for (const auto& inst : generate(spec).instances) {
    check_not_better(inst, greedy_knapsack(inst));
  }
  spec.task = TaskKind::BinPacking;
  spec.size_n = 9;
  for (const auto& inst : generate(spec).instances) {
    check_not_better(inst, first_fit_decreasing(inst));
  }
  spec.task = TaskKind::Vrp;
  spec.size_n = 6;
  for (const auto& inst : generate(spec).instances) {
    check_not_better(inst, sweep_vrp(inst));
  }
  spec.task = TaskKind::Jsp;
  spec.size_n = 3;  // 3 jobs x 3 machines = 9 operations
  for (const auto& inst : generate(spec).instances) {
    check_not_better(inst, dispatch_jsp(inst, DispatchRule::SPT));
    check_not_better(inst, dispatch_jsp(inst, DispatchRule::MWR));
  }
}
