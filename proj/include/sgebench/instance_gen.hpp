#pragma once

#include "sgebench/problems.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgebench {

struct GenSpec {
  TaskKind task = TaskKind::Tsp;
  int size_n = 5;
  int count = 100;
  std::uint64_t master_seed = 0;

  // Sampling parameters. Entries (costs, weights, values, sizes, durations)
  // are integers on [entry_lo, entry_hi]; coordinates on [coord_lo, coord_hi].
  int entry_lo = 1;
  int entry_hi = 100;
  int coord_lo = 0;
  int coord_hi = 100;
  int demand_lo = 1;
  int demand_hi = 10;
  double knapsack_capacity_factor = 0.5;  // W = round(factor * sum of weights)
  double binpacking_capacity = 100;
  int jsp_machines = 3;
  double vrp_vehicle_capacity = 40;
  // 0 means auto: max(3, ceil(sum residual demand / (P - max residual))),
  // which keeps capacity-cut constructions within the fleet at every size.
  int vrp_fleet_size = 0;
};

struct InstanceBatch {
  TaskKind task = TaskKind::Tsp;
  int size_n = 0;
  std::uint64_t master_seed = 0;
  std::vector<ProblemInstance> instances;
};

// Child seed for instance `index` of (master_seed, task, size). Instances are
// independent of generation order and of sibling batches.
std::uint64_t child_seed(std::uint64_t master_seed, TaskKind task, int size_n, int index);

// Deterministic batch generation per the sampling rules above.
InstanceBatch generate(const GenSpec& spec);

class InstanceFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaVersionError : public InstanceFileError {
 public:
  using InstanceFileError::InstanceFileError;
};

inline constexpr int kInstanceSchemaVersion = 1;

// JSON batch file, schema_version 1. Numbers sampled as integers are written
// as integers; load(save(x)) == x field for field.
void save_instances(const InstanceBatch& batch, const std::string& path);
InstanceBatch load_instances(const std::string& path);

// In-memory forms of the same codec (used by save/load and by tests).
std::string instances_to_json(const InstanceBatch& batch);
InstanceBatch instances_from_json(const std::string& text);

}  // namespace sgebench
