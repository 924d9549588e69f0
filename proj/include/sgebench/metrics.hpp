#pragma once

#include "sgebench/problems.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sgebench {

// Percentage improvement of g_method over the direct-prompting cost g_io,
// sign-flipped under Maximize so better is always positive.
double improvement(double g_io, double g_method, Sense sense);

// Percentage excess over the certified optimum, sign-flipped under Maximize.
double optimality_gap(double g_method, double g_opt, Sense sense);

struct InstanceOutcome {
  std::string instance_id;
  double cost = 0;
  double calls = 0;
  bool invalid = false;
};

struct RunReport {
  TaskKind task = TaskKind::Tsp;
  int size_n = 0;
  std::string strategy;
  double mean_cost = 0;
  std::optional<double> mean_io_cost;
  // Both aggregation conventions, side by side: improvement of the cost means
  // and the mean of per-instance improvements.
  std::optional<double> improvement_ratio_of_means;
  std::optional<double> improvement_mean_of_ratios;
  std::optional<double> optimality_gap_pct;  // mean per-instance gap when the oracle covers all
  double mean_calls = 0;
  int invalid_count = 0;
  int instance_count = 0;
};

// Aggregates one (task, size, strategy) batch. `paired_io` must cover the
// same instance ids when present; `oracle_costs` maps instance_id -> optimum.
RunReport aggregate(TaskKind task, int size_n, const std::string& strategy,
                    const std::vector<InstanceOutcome>& outcomes,
                    const std::vector<InstanceOutcome>* paired_io,
                    const std::map<std::string, double>* oracle_costs);

// report.txt: aligned plain-text table.
std::string render_table(const std::vector<RunReport>& reports);

// report.csv, header:
// task,size,strategy,mean_cost,improvement_ratio_of_means,improvement_mean_of_ratios,gap,mean_calls,invalid,count
std::string render_csv(const std::vector<RunReport>& reports);
std::vector<RunReport> parse_csv(const std::string& text);

}  // namespace sgebench
