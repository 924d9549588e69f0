#include "sgebench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sgebench {

double improvement(double g_io, double g_method, Sense sense) {
  if (!(g_io > 0)) throw std::invalid_argument("improvement requires g_io > 0");
  if (sense == Sense::Minimize) return 100.0 * (g_io - g_method) / g_io;
  return 100.0 * (g_method - g_io) / g_io;
}

double optimality_gap(double g_method, double g_opt, Sense sense) {
  if (!(g_opt > 0)) throw std::invalid_argument("optimality_gap requires g_opt > 0");
  if (sense == Sense::Minimize) return 100.0 * (g_method - g_opt) / g_opt;
  return 100.0 * (g_opt - g_method) / g_opt;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double total = 0;
  for (double x : v) total += x;
  return v.empty() ? 0 : total / static_cast<double>(v.size());
}

std::string num_field(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string opt_field(const std::optional<double>& v) {
  return v ? num_field(*v) : std::string();
}

}  // namespace

RunReport aggregate(TaskKind task, int size_n, const std::string& strategy,
                    const std::vector<InstanceOutcome>& outcomes,
                    const std::vector<InstanceOutcome>* paired_io,
                    const std::map<std::string, double>* oracle_costs) {
  if (outcomes.empty()) throw std::invalid_argument("aggregate requires at least one outcome");
  const Sense sense = task_sense(task);
  RunReport report;
  report.task = task;
  report.size_n = size_n;
  report.strategy = strategy;
  report.instance_count = static_cast<int>(outcomes.size());

  std::vector<double> costs, calls;
  for (const auto& o : outcomes) {
    costs.push_back(o.cost);
    calls.push_back(o.calls);
    if (o.invalid) report.invalid_count += 1;
  }
  report.mean_cost = mean_of(costs);
  report.mean_calls = mean_of(calls);

  if (paired_io) {
    if (paired_io->size() != outcomes.size()) {
      throw std::invalid_argument("paired io batch must cover the same instances");
    }
    std::map<std::string, double> io_by_id;
    std::vector<double> io_costs;
    for (const auto& o : *paired_io) {
      io_by_id[o.instance_id] = o.cost;
      io_costs.push_back(o.cost);
    }
    report.mean_io_cost = mean_of(io_costs);
    report.improvement_ratio_of_means =
        improvement(*report.mean_io_cost, report.mean_cost, sense);
    std::vector<double> per_instance;
    for (const auto& o : outcomes) {
      auto it = io_by_id.find(o.instance_id);
      if (it == io_by_id.end()) {
        throw std::invalid_argument("paired io batch is missing instance " + o.instance_id);
      }
      per_instance.push_back(improvement(it->second, o.cost, sense));
    }
    report.improvement_mean_of_ratios = mean_of(per_instance);
  }

  if (oracle_costs) {
    std::vector<double> gaps;
    bool complete = true;
    for (const auto& o : outcomes) {
      auto it = oracle_costs->find(o.instance_id);
      if (it == oracle_costs->end()) {
        complete = false;
        break;
      }
      double gap = optimality_gap(o.cost, it->second, sense);
      if (gap < -1e-9) {
        throw std::logic_error("optimality gap below zero for " + o.instance_id +
                               ": a certified optimum was beaten");
      }
      gaps.push_back(std::max(0.0, gap));
    }
    if (complete) report.optimality_gap_pct = mean_of(gaps);
  }
  return report;
}

std::string render_table(const std::vector<RunReport>& reports) {
  const char* headers[] = {"task",      "size", "strategy", "mean_cost", "impr_ratio",
                           "impr_mean", "gap",  "calls",    "invalid",   "count"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    char cost_buf[64], calls_buf[64];
    std::snprintf(cost_buf, sizeof(cost_buf), "%.2f", r.mean_cost);
    std::snprintf(calls_buf, sizeof(calls_buf), "%.2f", r.mean_calls);
    auto pct = [](const std::optional<double>& v) -> std::string {
      if (!v) return "-";
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f", *v);
      return buf;
    };
    rows.push_back({task_name(r.task), std::to_string(r.size_n), r.strategy, cost_buf,
                    pct(r.improvement_ratio_of_means), pct(r.improvement_mean_of_ratios),
                    pct(r.optimality_gap_pct), calls_buf, std::to_string(r.invalid_count),
                    std::to_string(r.instance_count)});
  }
  const std::size_t ncols = std::size(headers);
  std::vector<std::size_t> width(ncols);
  for (std::size_t c = 0; c < ncols; ++c) width[c] = std::string(headers[c]).size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < ncols; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < ncols; ++c) {
      os << row[c] << std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << "\n";
  };
  emit_row(std::vector<std::string>(headers, headers + ncols));
  std::size_t total = 0;
  for (std::size_t c = 0; c < ncols; ++c) total += width[c] + 2;
  os << std::string(total, '-') << "\n";
  for (const auto& row : rows) emit_row(row);
  return os.str();
}

std::string render_csv(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << "task,size,strategy,mean_cost,improvement_ratio_of_means,improvement_mean_of_ratios,"
        "gap,mean_calls,invalid,count\n";
  for (const auto& r : reports) {
    os << task_name(r.task) << "," << r.size_n << "," << r.strategy << ","
       << num_field(r.mean_cost) << "," << opt_field(r.improvement_ratio_of_means) << ","
       << opt_field(r.improvement_mean_of_ratios) << "," << opt_field(r.optimality_gap_pct)
       << "," << num_field(r.mean_calls) << "," << r.invalid_count << "," << r.instance_count
       << "\n";
  }
  return os.str();
}

std::vector<RunReport> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty csv");
  std::vector<RunReport> reports;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    while (fields.size() < 10) fields.emplace_back();
    RunReport r;
    r.task = task_from_name(fields[0]);
    r.size_n = std::stoi(fields[1]);
    r.strategy = fields[2];
    r.mean_cost = std::stod(fields[3]);
    if (!fields[4].empty()) r.improvement_ratio_of_means = std::stod(fields[4]);
    if (!fields[5].empty()) r.improvement_mean_of_ratios = std::stod(fields[5]);
    if (!fields[6].empty()) r.optimality_gap_pct = std::stod(fields[6]);
    r.mean_calls = std::stod(fields[7]);
    r.invalid_count = std::stoi(fields[8]);
    r.instance_count = std::stoi(fields[9]);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace sgebench
