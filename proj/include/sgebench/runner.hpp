#pragma once

#include "sgebench/backend_scripted.hpp"
#include "sgebench/config.hpp"
#include "sgebench/instance_gen.hpp"
#include "sgebench/strategies.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sgebench {

// Bad strategy/backend names and similar operator mistakes; the CLI maps
// these to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  std::string strategy = "io";    // io | cot | refine | decomp | sge | heuristic:<name>
  std::string backend = "scripted";  // scripted | live | cached
  RunConfig config;
  int io_samples = 3;
  int refine_rounds = 2;
  int decomp_max_steps = 10;
  long long max_calls = -1;  // global live-run brake; -1 = unlimited
  std::string out_dir;
  std::string cache_dir = "sgebench_cache";
  ScriptedPolicy scripted_policy;
};

struct InstanceRunRecord {
  std::string instance_id;
  double cost = 0;
  int calls = 0;
  int predicted_calls = 0;
  int thought_count = 0;
  bool invalid = false;
  std::string solution;  // bracketed encoding, empty on failure
  std::string error;     // nonempty when the run failed
};

struct BatchRunResult {
  std::vector<InstanceRunRecord> records;
  int failures = 0;
  bool aborted = false;  // call budget exhausted
};

const std::vector<std::string>& known_strategies();
const std::vector<std::string>& known_backends();

// Runs one strategy over a batch, one worker per instance (OpenMP when
// concurrency > 1), and writes per-instance artifacts plus summary.json under
// options.out_dir. Records are ordered by instance index regardless of
// completion order, so artifacts are byte-stable.
BatchRunResult run_batch(const InstanceBatch& batch, const RunOptions& options);

// Strategy run on a single instance against an explicit backend.
StrategyOutcome run_strategy(const ProblemInstance& instance, Backend& backend,
                             const RunOptions& options);

}  // namespace sgebench
