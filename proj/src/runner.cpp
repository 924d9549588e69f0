#include "sgebench/runner.hpp"

#include "sgebench/backend_cache.hpp"
#include "sgebench/backend_live.hpp"
#include "sgebench/heuristics.hpp"
#include "sgebench/oracle.hpp"
#include "sgebench/parallel.hpp"
#include "sgebench/sge.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>

namespace sgebench {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

// Enforces the --max-calls brake across the whole batch.
class BudgetBackend final : public Backend {
 public:
  BudgetBackend(Backend& upstream, std::atomic<long long>& remaining)
      : upstream_(&upstream), remaining_(&remaining) {}

  std::string complete(const GenRequest& request) override {
    if (remaining_->fetch_sub(1) <= 0) {
      throw BackendError("call budget exhausted", 0);
    }
    return upstream_->complete(request);
  }
  bool deterministic() const override { return upstream_->deterministic(); }

 private:
  Backend* upstream_;
  std::atomic<long long>* remaining_;
};

StrategyOutcome run_heuristic(const ProblemInstance& inst, const std::string& name) {
  Solution sol;
  if (name == "nn" && inst.task == TaskKind::Tsp) {
    sol = nearest_neighbor(inst, 0);
  } else if (name == "nn2opt" && inst.task == TaskKind::Tsp) {
    sol = two_opt(inst, nearest_neighbor(inst, 0));
  } else if (name == "sweep" && inst.task == TaskKind::Vrp) {
    sol = sweep_vrp(inst);
  } else if (name == "greedy" && inst.task == TaskKind::Knapsack) {
    sol = greedy_knapsack(inst);
  } else if (name == "ffd" && inst.task == TaskKind::BinPacking) {
    sol = first_fit_decreasing(inst);
  } else if (name == "spt" && inst.task == TaskKind::Jsp) {
    sol = dispatch_jsp(inst, DispatchRule::SPT);
  } else if (name == "mwr" && inst.task == TaskKind::Jsp) {
    sol = dispatch_jsp(inst, DispatchRule::MWR);
  } else if (name == "hungarian" && inst.task == TaskKind::Assignment) {
    auto [perm, cost] = hungarian(inst.assignment().cost_matrix);
    (void)cost;
    sol = Solution{inst.task, PermSolution{std::move(perm)}};
  } else if (name == "fallback") {
    sol = canonical_fallback(inst);
  } else {
    throw UsageError("heuristic '" + name + "' does not apply to task '" +
                     task_name(inst.task) +
                     "'; valid: nn, nn2opt (tsp), sweep (vrp), greedy (knapsack), "
                     "ffd (binpacking), spt, mwr (jsp), hungarian (assignment), fallback");
  }
  StrategyOutcome outcome;
  outcome.solution = std::move(sol);
  outcome.cost = benchmark_cost(inst, outcome.solution);
  return outcome;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

ordered_json outcome_json(const StrategyOutcome& outcome) {
  ordered_json j;
  j["cost"] = outcome.cost.value;
  j["sense"] = outcome.cost.sense == Sense::Maximize ? "maximize" : "minimize";
  j["calls"] = outcome.calls;
  j["predicted_calls"] = outcome.predicted_calls;
  j["invalid"] = outcome.invalid;
  j["thought_count"] = outcome.thought_count;
  j["solution"] = encode_solution(outcome.solution);
  j["events"] = outcome.events;
  if (!outcome.trajectories.empty()) {
    ordered_json trajs = ordered_json::array();
    for (const auto& t : outcome.trajectories) {
      ordered_json tj;
      tj["method"] = t.method_name;
      tj["depth"] = t.depth;
      tj["subtask_queries"] = t.subtask_queries;
      tj["thoughts"] = t.thoughts;
      trajs.push_back(std::move(tj));
    }
    j["trajectories"] = std::move(trajs);
  }
  return j;
}

}  // namespace

const std::vector<std::string>& known_strategies() {
  static const std::vector<std::string> names = {
      "io", "cot", "refine", "decomp", "sge", "heuristic:<name>"};
  return names;
}

const std::vector<std::string>& known_backends() {
  static const std::vector<std::string> names = {"scripted", "live", "cached"};
  return names;
}

StrategyOutcome run_strategy(const ProblemInstance& inst, Backend& backend,
                             const RunOptions& options) {
  const std::string& s = options.strategy;
  if (s == "io") return run_io(inst, backend, options.io_samples);
  if (s == "cot") return run_cot(inst, backend, options.io_samples);
  if (s == "refine") return run_refine(inst, backend, options.refine_rounds);
  if (s == "decomp") return run_decomp(inst, backend, options.decomp_max_steps);
  if (s == "sge") {
    SgeConfig cfg;
    cfg.max_trajectories = options.config.sge_n_cap;
    cfg.max_subtasks = options.config.sge_k_cap;
    cfg.max_depth = options.config.sge_depth;
    cfg.refine_rounds = options.config.sge_refine_rounds;
    cfg.temperature = backend.deterministic() ? 0.0 : options.config.backend_temperature;
    return run_sge(inst, backend, cfg);
  }
  if (s.rfind("heuristic:", 0) == 0) return run_heuristic(inst, s.substr(10));
  throw UsageError("unknown strategy '" + s + "'; valid: io, cot, refine, decomp, sge, "
                   "heuristic:<name>");
}

BatchRunResult run_batch(const InstanceBatch& batch, const RunOptions& options) {
  if (options.backend != "scripted" && options.backend != "live" &&
      options.backend != "cached") {
    throw UsageError("unknown backend '" + options.backend +
                     "'; valid: scripted, live, cached");
  }
  // Validate the strategy name up front so a typo is a usage error, not a
  // per-instance failure.
  if (options.strategy.rfind("heuristic:", 0) == 0) {
    const std::string name = options.strategy.substr(10);
    const std::map<std::string, TaskKind> applicable = {
        {"nn", TaskKind::Tsp},          {"nn2opt", TaskKind::Tsp},
        {"sweep", TaskKind::Vrp},       {"greedy", TaskKind::Knapsack},
        {"ffd", TaskKind::BinPacking},  {"spt", TaskKind::Jsp},
        {"mwr", TaskKind::Jsp},         {"hungarian", TaskKind::Assignment},
    };
    const auto it = applicable.find(name);
    if (name != "fallback" && (it == applicable.end() || it->second != batch.task)) {
      throw UsageError("heuristic '" + name + "' does not apply to task '" +
                       std::string(task_name(batch.task)) +
                       "'; valid: nn, nn2opt (tsp), sweep (vrp), greedy (knapsack), "
                       "ffd (binpacking), spt, mwr (jsp), hungarian (assignment), fallback");
    }
  } else if (options.strategy != "io" && options.strategy != "cot" &&
             options.strategy != "refine" && options.strategy != "decomp" &&
             options.strategy != "sge") {
    throw UsageError("unknown strategy '" + options.strategy +
                     "'; valid: io, cot, refine, decomp, sge, heuristic:<name>");
  }

  const int n = static_cast<int>(batch.instances.size());
  BatchRunResult result;
  result.records.resize(static_cast<std::size_t>(n));

  std::unique_ptr<LiveBackend> live;
  if (options.backend == "live" || options.backend == "cached") {
    LiveBackendConfig lc;
    lc.base_url = options.config.backend_base_url;
    lc.model = options.config.backend_model;
    lc.max_in_flight = std::max(1, options.config.run_concurrency);
    lc.rate_limit_per_min = options.config.run_rate_limit_per_min;
    live = std::make_unique<LiveBackend>(lc);
  }
  std::unique_ptr<CachingBackend> cache;
  if (options.backend == "cached") {
    cache = std::make_unique<CachingBackend>(options.cache_dir, *live,
                                             options.config.backend_model);
  }

  std::atomic<long long> budget(options.max_calls >= 0 ? options.max_calls
                                                       : std::numeric_limits<long long>::max());
  std::atomic<bool> aborted(false);

  const fs::path out_dir(options.out_dir);
  if (!options.out_dir.empty()) fs::create_directories(out_dir);

  parallel_for(n, options.config.run_concurrency, [&](int i) {
    const ProblemInstance& inst = batch.instances[static_cast<std::size_t>(i)];
    InstanceRunRecord& record = result.records[static_cast<std::size_t>(i)];
    record.instance_id = inst.instance_id;
    try {
      std::unique_ptr<ScriptedBackend> scripted;
      Backend* base = nullptr;
      if (options.backend == "scripted") {
        scripted = std::make_unique<ScriptedBackend>(inst, options.scripted_policy);
        base = scripted.get();
      } else if (options.backend == "cached") {
        base = cache.get();
      } else {
        base = live.get();
      }
      BudgetBackend budgeted(*base, budget);
      StrategyOutcome outcome = run_strategy(inst, budgeted, options);
      record.cost = outcome.cost.value;
      record.calls = outcome.calls;
      record.predicted_calls = outcome.predicted_calls;
      record.thought_count = outcome.thought_count;
      record.invalid = outcome.invalid;
      record.solution = encode_solution(outcome.solution);
      if (!options.out_dir.empty()) {
        const fs::path inst_dir = out_dir / inst.instance_id;
        fs::create_directories(inst_dir);
        write_file(inst_dir / "transcript.jsonl", outcome.transcript.to_jsonl());
        write_file(inst_dir / "outcome.json", outcome_json(outcome).dump(2) + "\n");
      }
    } catch (const StrategyError& e) {
      record.error = e.what();
      if (std::string(e.what()).find("call budget exhausted") != std::string::npos) {
        aborted.store(true);
      }
      if (!options.out_dir.empty()) {
        const fs::path inst_dir = out_dir / inst.instance_id;
        fs::create_directories(inst_dir);
        write_file(inst_dir / "transcript.jsonl", e.partial_transcript.to_jsonl());
      }
    } catch (const BackendError& e) {
      record.error = e.what();
      if (std::string(e.what()).find("call budget exhausted") != std::string::npos) {
        aborted.store(true);
      }
    } catch (const std::exception& e) {
      record.error = e.what();
    }
  });

  for (const auto& r : result.records) {
    if (!r.error.empty()) result.failures += 1;
  }
  result.aborted = aborted.load();

  if (!options.out_dir.empty()) {
    ordered_json summary;
    summary["schema_version"] = 1;
    summary["task_kind"] = task_name(batch.task);
    summary["size_n"] = batch.size_n;
    summary["master_seed"] = batch.master_seed;
    summary["strategy"] = options.strategy;
    summary["backend"] = options.backend;
    summary["config"] = ordered_json::parse(config_echo_json(options.config));
    summary["aborted"] = result.aborted;
    ordered_json records = ordered_json::array();
    for (const auto& r : result.records) {
      ordered_json rj;
      rj["instance_id"] = r.instance_id;
      if (r.error.empty()) {
        rj["cost"] = r.cost;
        rj["calls"] = r.calls;
        rj["predicted_calls"] = r.predicted_calls;
        rj["thought_count"] = r.thought_count;
        rj["invalid"] = r.invalid;
        rj["solution"] = r.solution;
      } else {
        rj["error"] = r.error;
      }
      records.push_back(std::move(rj));
    }
    summary["records"] = std::move(records);
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  }
  return result;
}

}  // namespace sgebench
