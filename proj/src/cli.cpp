#include "sgebench/cli.hpp"

#include "sgebench/instance_gen.hpp"
#include "sgebench/metrics.hpp"
#include "sgebench/oracle.hpp"
#include "sgebench/parallel.hpp"
#include "sgebench/runner.hpp"
#include "sgebench/strategies.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace sgebench {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenArgs {
  std::string task;
  int size = 5;
  int count = 100;
  std::uint64_t seed = 0;
  std::string out;
  int machines = 3;
  int fleet = 0;
  double vehicle_capacity = 40;
  double bin_capacity = 100;
  double knapsack_factor = 0.5;
};

int cmd_gen(const GenArgs& args) {
  GenSpec spec;
  spec.task = task_from_name(args.task);
  spec.size_n = args.size;
  spec.count = args.count;
  spec.master_seed = args.seed;
  spec.jsp_machines = args.machines;
  spec.vrp_fleet_size = args.fleet;
  spec.vrp_vehicle_capacity = args.vehicle_capacity;
  spec.binpacking_capacity = args.bin_capacity;
  spec.knapsack_capacity_factor = args.knapsack_factor;
  const InstanceBatch batch = generate(spec);
  save_instances(batch, args.out);
  std::cout << "wrote " << batch.instances.size() << " " << task_name(batch.task)
            << " instances (n=" << batch.size_n << ") to " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

int cmd_oracle(const std::string& in, const std::string& out, int concurrency) {
  const InstanceBatch batch = load_instances(in);
  const int n = static_cast<int>(batch.instances.size());
  struct Row {
    std::string status;
    double cost = 0;
    std::string solution;
    std::uint64_t explored = 0;
    double elapsed_ms = 0;
    std::string error;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n));
  parallel_for(n, concurrency, [&](int i) {
    const auto& inst = batch.instances[static_cast<std::size_t>(i)];
    Row& row = rows[static_cast<std::size_t>(i)];
    try {
      if (!oracle_tractable(inst)) {
        row.status = "unavailable";
        return;
      }
      const OracleResult res = solve_exact(inst);
      row.status = "optimal";
      row.cost = res.optimal_cost;
      row.solution = encode_solution(res.optimal_solution);
      row.explored = res.explored;
      row.elapsed_ms = res.elapsed_seconds * 1000.0;
    } catch (const std::exception& e) {
      row.status = "error";
      row.error = e.what();
    }
  });

  ordered_json root;
  root["schema_version"] = 1;
  root["task_kind"] = task_name(batch.task);
  root["size_n"] = batch.size_n;
  root["master_seed"] = batch.master_seed;
  ordered_json list = ordered_json::array();
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    const auto& inst = batch.instances[static_cast<std::size_t>(i)];
    const Row& row = rows[static_cast<std::size_t>(i)];
    ordered_json j;
    j["instance_id"] = inst.instance_id;
    j["status"] = row.status;
    if (row.status == "optimal") {
      j["cost"] = row.cost;
      j["solution"] = row.solution;
      j["explored"] = row.explored;
      j["elapsed_ms"] = row.elapsed_ms;
    } else if (row.status == "error") {
      j["error"] = row.error;
      failures += 1;
    }
    list.push_back(std::move(j));
  }
  root["solutions"] = std::move(list);
  write_file(out, root.dump(2) + "\n");
  std::cout << "oracle: " << n - failures << "/" << n << " entries written to " << out << "\n";
  return failures ? 1 : 0;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunArgs {
  std::string in;
  std::string out;
  std::string strategy = "io";
  std::string backend = "scripted";
  std::string config_path;
  int samples = 3;
  int rounds = 2;
  int max_steps = 10;
  long long max_calls = -1;
  int concurrency = -1;
  std::string cache_dir = "sgebench_cache";
  bool check_always_no = false;
  // flag overrides for config keys
  std::string base_url, model;
  double temperature = -1;
  int n_cap = -1, k_cap = -1, depth = -1, refine_rounds = -1, rate_limit = -1;
};

int cmd_run(const RunArgs& args) {
  RunOptions options;
  options.strategy = args.strategy;
  options.backend = args.backend;
  if (!args.config_path.empty()) options.config = load_config_file(args.config_path);
  if (!args.base_url.empty()) options.config.backend_base_url = args.base_url;
  if (!args.model.empty()) options.config.backend_model = args.model;
  if (args.temperature >= 0) options.config.backend_temperature = args.temperature;
  if (args.n_cap > 0) options.config.sge_n_cap = args.n_cap;
  if (args.k_cap > 0) options.config.sge_k_cap = args.k_cap;
  if (args.depth > 0) options.config.sge_depth = args.depth;
  if (args.refine_rounds >= 0) options.config.sge_refine_rounds = args.refine_rounds;
  if (args.rate_limit > 0) options.config.run_rate_limit_per_min = args.rate_limit;
  if (args.concurrency > 0) options.config.run_concurrency = args.concurrency;
  options.io_samples = args.samples;
  options.refine_rounds = args.rounds;
  options.decomp_max_steps = args.max_steps;
  options.max_calls = args.max_calls;
  options.out_dir = args.out;
  options.cache_dir = args.cache_dir;
  if (args.check_always_no) {
    options.scripted_policy.check_mode = ScriptedPolicy::CheckMode::AlwaysNo;
  }

  const InstanceBatch batch = load_instances(args.in);
  const BatchRunResult result = run_batch(batch, options);
  int valid = 0;
  for (const auto& r : result.records) {
    if (r.error.empty() && !r.invalid) valid += 1;
  }
  std::cout << "run " << options.strategy << "/" << options.backend << ": "
            << result.records.size() << " instances, " << valid << " valid answers, "
            << result.failures << " failures" << (result.aborted ? " (budget aborted)" : "")
            << "\n";
  return (result.failures > 0 || result.aborted) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct LoadedRun {
  TaskKind task;
  int size_n = 0;
  std::string strategy;
  std::vector<InstanceOutcome> outcomes;
};

LoadedRun load_run_dir(const std::string& dir) {
  const std::string text = slurp((fs::path(dir) / "summary.json").string());
  const auto j = nlohmann::json::parse(text);
  LoadedRun run;
  run.task = task_from_name(j.at("task_kind").get<std::string>());
  run.size_n = j.at("size_n").get<int>();
  run.strategy = j.at("strategy").get<std::string>();
  for (const auto& rj : j.at("records")) {
    if (rj.contains("error")) {
      throw std::runtime_error(dir + ": record " +
                               rj.at("instance_id").get<std::string>() + " failed: " +
                               rj.at("error").get<std::string>());
    }
    InstanceOutcome o;
    o.instance_id = rj.at("instance_id").get<std::string>();
    o.cost = rj.at("cost").get<double>();
    o.calls = rj.at("calls").get<double>();
    o.invalid = rj.at("invalid").get<bool>();
    run.outcomes.push_back(std::move(o));
  }
  return run;
}

int cmd_report(const std::vector<std::string>& run_dirs,
               const std::vector<std::string>& oracle_files, const std::string& out_dir) {
  std::vector<LoadedRun> runs;
  for (const auto& dir : run_dirs) runs.push_back(load_run_dir(dir));

  std::map<std::pair<std::string, int>, std::map<std::string, double>> oracle_costs;
  for (const auto& path : oracle_files) {
    const auto j = nlohmann::json::parse(slurp(path));
    auto& bucket = oracle_costs[{j.at("task_kind").get<std::string>(), j.at("size_n").get<int>()}];
    for (const auto& sj : j.at("solutions")) {
      if (sj.at("status").get<std::string>() == "optimal") {
        bucket[sj.at("instance_id").get<std::string>()] = sj.at("cost").get<double>();
      }
    }
  }

  // Pair every run with the io run over the same (task, size) instance set.
  std::map<std::pair<std::string, int>, const LoadedRun*> io_runs;
  for (const auto& run : runs) {
    if (run.strategy == "io") io_runs[{task_name(run.task), run.size_n}] = &run;
  }

  std::vector<RunReport> reports;
  for (const auto& run : runs) {
    const auto key = std::make_pair(std::string(task_name(run.task)), run.size_n);
    const auto io_it = io_runs.find(key);
    const std::vector<InstanceOutcome>* paired =
        io_it != io_runs.end() ? &io_it->second->outcomes : nullptr;
    const auto oracle_it = oracle_costs.find(key);
    const std::map<std::string, double>* oracle =
        oracle_it != oracle_costs.end() ? &oracle_it->second : nullptr;
    reports.push_back(aggregate(run.task, run.size_n, run.strategy, run.outcomes, paired, oracle));
  }
  std::stable_sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) {
    const int ta = static_cast<int>(a.task), tb = static_cast<int>(b.task);
    if (ta != tb) return ta < tb;
    if (a.size_n != b.size_n) return a.size_n < b.size_n;
    return a.strategy < b.strategy;
  });

  fs::create_directories(out_dir);
  write_file((fs::path(out_dir) / "report.txt").string(), render_table(reports));
  write_file((fs::path(out_dir) / "report.csv").string(), render_csv(reports));
  std::cout << render_table(reports);
  return 0;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& in, const std::string& solutions_path) {
  const InstanceBatch batch = load_instances(in);
  std::map<std::string, const ProblemInstance*> by_id;
  for (const auto& inst : batch.instances) by_id[inst.instance_id] = &inst;

  const auto j = nlohmann::json::parse(slurp(solutions_path));
  int bad = 0, checked = 0;
  for (const auto& sj : j.at("solutions")) {
    const std::string id = sj.at("instance_id").get<std::string>();
    if (!sj.contains("solution")) continue;
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      std::cout << id << ": not in instance file\n";
      bad += 1;
      continue;
    }
    checked += 1;
    const ParseResult parsed =
        parse_answer("SOLUTION: " + sj.at("solution").get<std::string>(), *it->second);
    if (!parsed.solution) {
      std::cout << id << ": INVALID (" << parsed.error << ")\n";
      bad += 1;
      continue;
    }
    const double cost = benchmark_cost(*it->second, *parsed.solution).value;
    std::cout << id << ": ok, cost " << cost;
    if (sj.contains("cost")) {
      const double stored = sj.at("cost").get<double>();
      if (std::abs(stored - cost) > 1e-6 * std::max(1.0, std::abs(stored))) {
        std::cout << " (MISMATCH: stored " << stored << ")";
        bad += 1;
      }
    }
    std::cout << "\n";
  }
  std::cout << "validate: " << checked - bad << "/" << checked << " solutions ok\n";
  return bad ? 1 : 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Combinatorial-optimization prompting benchmark"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "Generate a seeded instance batch");
  gen->add_option("--task", gen_args.task, "assignment|knapsack|binpacking|tsp|vrp|jsp")
      ->required();
  gen->add_option("--size", gen_args.size, "elements per instance")->required();
  gen->add_option("--count", gen_args.count, "instances in the batch");
  gen->add_option("--seed", gen_args.seed, "master seed");
  gen->add_option("--out", gen_args.out, "output instance file")->required();
  gen->add_option("--machines", gen_args.machines, "jsp machine count");
  gen->add_option("--fleet", gen_args.fleet, "vrp fleet size (0 = auto)");
  gen->add_option("--vehicle-capacity", gen_args.vehicle_capacity, "vrp vehicle capacity");
  gen->add_option("--bin-capacity", gen_args.bin_capacity, "binpacking capacity");
  gen->add_option("--knapsack-factor", gen_args.knapsack_factor, "knapsack capacity factor");

  std::string oracle_in, oracle_out;
  int oracle_concurrency = 4;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact solutions where tractable");
  oracle_cmd->add_option("--in", oracle_in, "instance file")->required();
  oracle_cmd->add_option("--out", oracle_out, "solutions file")->required();
  oracle_cmd->add_option("--concurrency", oracle_concurrency, "parallel workers");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a strategy over an instance batch");
  run->add_option("--in", run_args.in, "instance file")->required();
  run->add_option("--out", run_args.out, "run artifact directory")->required();
  run->add_option("--strategy", run_args.strategy, "io|cot|refine|decomp|sge|heuristic:<name>");
  run->add_option("--backend", run_args.backend, "scripted|live|cached");
  run->add_option("--config", run_args.config_path, "key=value config file");
  run->add_option("--samples", run_args.samples, "io/cot sample count");
  run->add_option("--rounds", run_args.rounds, "refine rounds");
  run->add_option("--max-steps", run_args.max_steps, "decomp step cap");
  run->add_option("--max-calls", run_args.max_calls, "abort after this many calls");
  run->add_option("--concurrency", run_args.concurrency, "parallel workers");
  run->add_option("--cache-dir", run_args.cache_dir, "cache directory (cached backend)");
  run->add_flag("--check-always-no", run_args.check_always_no,
                "scripted simplicity checks always answer no");
  run->add_option("--base-url", run_args.base_url, "override backend.base_url");
  run->add_option("--model", run_args.model, "override backend.model");
  run->add_option("--temperature", run_args.temperature, "override backend.temperature");
  run->add_option("--n-cap", run_args.n_cap, "override sge.n_cap");
  run->add_option("--k-cap", run_args.k_cap, "override sge.k_cap");
  run->add_option("--depth", run_args.depth, "override sge.depth");
  run->add_option("--refine-rounds", run_args.refine_rounds, "override sge.refine_rounds");
  run->add_option("--rate-limit", run_args.rate_limit, "override run.rate_limit_per_min");

  std::vector<std::string> report_runs;
  std::vector<std::string> report_oracles;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Aggregate run directories into tables");
  report->add_option("--runs", report_runs, "run artifact directories")->required()
      ->expected(-1);
  report->add_option("--oracle", report_oracles, "oracle solution files")->expected(-1);
  report->add_option("--out", report_out, "report output directory")->required();

  std::string validate_in, validate_solutions;
  auto* validate_cmd = app.add_subcommand("validate", "Re-validate and re-cost stored solutions");
  validate_cmd->add_option("--in", validate_in, "instance file")->required();
  validate_cmd->add_option("--solutions", validate_solutions, "solutions file")->required();

  std::vector<const char*> argv;
  argv.push_back("sgebench");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (gen->parsed()) return cmd_gen(gen_args);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_in, oracle_out, oracle_concurrency);
    if (run->parsed()) return cmd_run(run_args);
    if (report->parsed()) return cmd_report(report_runs, report_oracles, report_out);
    if (validate_cmd->parsed()) return cmd_validate(validate_in, validate_solutions);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaVersionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InstanceFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sgebench
