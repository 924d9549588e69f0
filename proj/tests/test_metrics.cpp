#include "sgebench/metrics.hpp"

#include "sgebench/instance_gen.hpp"
#include "sgebench/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace sgebench;

TEST_CASE("improvement formula, both senses") {
  CHECK(improvement(100, 80, Sense::Minimize) == doctest::Approx(20.0));
  CHECK(improvement(100, 120, Sense::Minimize) == doctest::Approx(-20.0));
  CHECK(improvement(100, 120, Sense::Maximize) == doctest::Approx(20.0));
  CHECK_THROWS_AS(improvement(0, 10, Sense::Minimize), std::invalid_argument);
  CHECK_THROWS_AS(improvement(-5, 10, Sense::Minimize), std::invalid_argument);
}

TEST_CASE("improvement reproduces the published size-5 entries") {
  // Assignment: io 267.83 vs 149.84; Knapsack: io 267.03 vs 469.81.
  CHECK(improvement(267.83, 149.84, Sense::Minimize) == doctest::Approx(44.05).epsilon(0.0003));
  CHECK(std::abs(improvement(267.83, 149.84, Sense::Minimize) - 44.05) < 0.01);
  CHECK(std::abs(improvement(267.03, 469.81, Sense::Maximize) - 75.94) < 0.01);
}

TEST_CASE("ratio-of-means reproduces the full published assignment/knapsack columns") {
  struct Row {
    double io, ours, expected;
  };
  // Assignment column (minimize), sizes 5..30.
  const Row assignment[] = {{267.83, 149.84, 44.05}, {365.34, 211.78, 42.03},
                            {534.81, 306.72, 42.65}, {634.70, 369.55, 41.78},
                            {754.98, 451.14, 40.24}, {959.89, 577.56, 39.83},
                            {1166.32, 714.42, 38.75}};
  for (const auto& row : assignment) {
    CHECK(std::abs(improvement(row.io, row.ours, Sense::Minimize) - row.expected) < 0.01);
  }
  // Knapsack column (maximize), sizes 5..30.
  const Row knapsack[] = {{267.03, 469.81, 75.94},   {415.19, 735.45, 77.14},
                          {680.40, 1173.71, 72.50},  {996.41, 1710.83, 71.70},
                          {1189.83, 1989.48, 67.21}, {1622.78, 2711.18, 67.07},
                          {2079.35, 3350.95, 61.15}};
  for (const auto& row : knapsack) {
    CHECK(std::abs(improvement(row.io, row.ours, Sense::Maximize) - row.expected) < 0.01);
  }
}

TEST_CASE("improvement properties: zero at parity, scale invariant") {
  for (double g : {0.5, 1.0, 42.0, 1e6}) {
    CHECK(improvement(g, g, Sense::Minimize) == doctest::Approx(0.0));
    CHECK(improvement(g, g, Sense::Maximize) == doctest::Approx(0.0));
  }
  const double base = improvement(267.83, 149.84, Sense::Minimize);
  for (double lambda : {0.01, 3.5, 1000.0}) {
    CHECK(improvement(267.83 * lambda, 149.84 * lambda, Sense::Minimize) ==
          doctest::Approx(base));
  }
}

TEST_CASE("optimality gap formula") {
  CHECK(optimality_gap(100, 100, Sense::Minimize) == doctest::Approx(0.0));
  CHECK(optimality_gap(112.16, 100, Sense::Minimize) == doctest::Approx(12.16));
  CHECK(optimality_gap(80, 100, Sense::Maximize) == doctest::Approx(20.0));
  CHECK_THROWS_AS(optimality_gap(10, 0, Sense::Minimize), std::invalid_argument);
}

TEST_CASE("oracle optimum fed back gives zero gap across a batch") {
  GenSpec spec;
  spec.task = TaskKind::Knapsack;
  spec.size_n = 10;
  spec.count = 50;
  spec.master_seed = 1234;
  std::vector<InstanceOutcome> outcomes;
  std::map<std::string, double> oracle_costs;
  for (const auto& inst : generate(spec).instances) {
    const OracleResult res = solve_exact(inst);
    outcomes.push_back({inst.instance_id, res.optimal_cost, 1, false});
    oracle_costs[inst.instance_id] = res.optimal_cost;
  }
  const RunReport report =
      aggregate(spec.task, spec.size_n, "oracle", outcomes, nullptr, &oracle_costs);
  REQUIRE(report.optimality_gap_pct.has_value());
  CHECK(*report.optimality_gap_pct == doctest::Approx(0.0));
}

TEST_CASE("aggregate means, pairing, and dual improvement conventions") {
  std::vector<InstanceOutcome> io = {{"a", 10, 1, false}, {"b", 20, 1, false}};
  std::vector<InstanceOutcome> method = {{"a", 5, 9, false}, {"b", 18, 9, true}};
  const RunReport report =
      aggregate(TaskKind::Tsp, 5, "sge", method, &io, nullptr);
  CHECK(report.mean_cost == doctest::Approx(11.5));
  CHECK(report.mean_calls == doctest::Approx(9.0));
  CHECK(report.invalid_count == 1);
  CHECK(report.instance_count == 2);
  REQUIRE(report.mean_io_cost.has_value());
  CHECK(*report.mean_io_cost == doctest::Approx(15.0));
  // ratio of means: 100*(15-11.5)/15; mean of ratios: (50 + 10)/2.
  CHECK(*report.improvement_ratio_of_means == doctest::Approx(100.0 * 3.5 / 15.0));
  CHECK(*report.improvement_mean_of_ratios == doctest::Approx(30.0));
  CHECK_FALSE(report.optimality_gap_pct.has_value());

  // two instances with costs 10 and 20 -> mean 15
  const RunReport mean_only = aggregate(TaskKind::Tsp, 5, "io", io, nullptr, nullptr);
  CHECK(mean_only.mean_cost == doctest::Approx(15.0));
}

TEST_CASE("gap column stays empty when the oracle misses instances") {
  std::vector<InstanceOutcome> outcomes = {{"a", 10, 1, false}, {"b", 20, 1, false}};
  std::map<std::string, double> partial = {{"a", 9.0}};
  const RunReport report =
      aggregate(TaskKind::Tsp, 5, "io", outcomes, nullptr, &partial);
  CHECK_FALSE(report.optimality_gap_pct.has_value());
}

TEST_CASE("beating a certified optimum is a hard error") {
  std::vector<InstanceOutcome> outcomes = {{"a", 8, 1, false}};
  std::map<std::string, double> oracle_costs = {{"a", 9.0}};
  CHECK_THROWS_AS(
      aggregate(TaskKind::Tsp, 5, "io", outcomes, nullptr, &oracle_costs),
      std::logic_error);
}

TEST_CASE("csv round-trips byte for byte") {
  std::vector<RunReport> reports;
  RunReport a;
  a.task = TaskKind::Knapsack;
  a.size_n = 5;
  a.strategy = "sge";
  a.mean_cost = 469.81;
  a.mean_io_cost = 267.03;
  a.improvement_ratio_of_means = improvement(267.03, 469.81, Sense::Maximize);
  a.improvement_mean_of_ratios = 74.5;
  a.mean_calls = 58.32;
  a.invalid_count = 2;
  a.instance_count = 100;
  reports.push_back(a);
  RunReport b;
  b.task = TaskKind::Tsp;
  b.size_n = 8;
  b.strategy = "io";
  b.mean_cost = 1425.48;
  b.mean_calls = 1;
  b.instance_count = 100;
  reports.push_back(b);

  const std::string csv = render_csv(reports);
  CHECK(csv.rfind("task,size,strategy,mean_cost,improvement_ratio_of_means,"
                  "improvement_mean_of_ratios,gap,mean_calls,invalid,count\n",
                  0) == 0);
  const auto parsed = parse_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(render_csv(parsed) == csv);
  CHECK(parsed[0].strategy == "sge");
  CHECK_FALSE(parsed[1].improvement_ratio_of_means.has_value());
}

TEST_CASE("plain-text table lines up and holds every strategy row") {
  std::vector<RunReport> reports;
  RunReport r;
  r.task = TaskKind::Vrp;
  r.size_n = 8;
  r.strategy = "sge";
  r.mean_cost = 667.76;
  r.improvement_ratio_of_means = 29.85;
  r.mean_calls = 58;
  r.instance_count = 100;
  reports.push_back(r);
  const std::string table = render_table(reports);
  CHECK(table.find("vrp") != std::string::npos);
  CHECK(table.find("sge") != std::string::npos);
  CHECK(table.find("667.76") != std::string::npos);
}
