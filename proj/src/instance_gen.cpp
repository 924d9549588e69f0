#include "sgebench/instance_gen.hpp"

#include "sgebench/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace sgebench {

using ordered_json = nlohmann::ordered_json;

namespace {

// Integers sampled as integers stay integers on the wire.
ordered_json num(double v) {
  if (std::floor(v) == v && std::abs(v) < 9.0e15) {
    return ordered_json(static_cast<std::int64_t>(v));
  }
  return ordered_json(v);
}

ordered_json point_json(const Point& p) { return ordered_json::array({num(p.x), num(p.y)}); }

std::string instance_id_for(TaskKind task, int size_n, std::uint64_t master_seed, int index) {
  std::ostringstream os;
  os << task_name(task) << "-n" << size_n << "-s" << master_seed << "-i" << index;
  return os.str();
}

std::vector<Point> sample_distinct_points(SplitMix64& rng, int count, int lo, int hi) {
  std::vector<Point> points;
  std::set<std::pair<long long, long long>> seen;
  points.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(points.size()) < count) {
    const long long x = rng.uniform_int(lo, hi);
    const long long y = rng.uniform_int(lo, hi);
    if (seen.insert({x, y}).second) {
      points.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
  }
  return points;
}

int auto_fleet_size(const std::vector<double>& demands, double capacity) {
  double total = 0;
  double max_residual = 0;
  for (double q : demands) {
    const double r = vrp_residual_demand(q, capacity);
    total += r;
    max_residual = std::max(max_residual, r);
  }
  const double slack = capacity - max_residual;
  int needed = 1;
  if (total > 0 && slack > 0) {
    needed = static_cast<int>(std::ceil(total / slack - 1e-9));
  }
  return std::max(3, std::max(1, needed));
}

ProblemInstance generate_one(const GenSpec& spec, int index) {
  ProblemInstance inst;
  inst.task = spec.task;
  inst.size_n = spec.size_n;
  inst.seed = child_seed(spec.master_seed, spec.task, spec.size_n, index);
  inst.instance_id = instance_id_for(spec.task, spec.size_n, spec.master_seed, index);
  SplitMix64 rng(inst.seed);
  const int n = spec.size_n;

  switch (spec.task) {
    case TaskKind::Assignment: {
      AssignmentPayload p;
      p.cost_matrix.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          p.cost_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              static_cast<double>(rng.uniform_int(spec.entry_lo, spec.entry_hi));
        }
      }
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Knapsack: {
      KnapsackPayload p;
      for (int i = 0; i < n; ++i) {
        p.weights.push_back(static_cast<double>(rng.uniform_int(spec.entry_lo, spec.entry_hi)));
        p.values.push_back(static_cast<double>(rng.uniform_int(spec.entry_lo, spec.entry_hi)));
      }
      const double total = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
      p.capacity = static_cast<double>(
          std::llround(spec.knapsack_capacity_factor * total));
      const double max_w = *std::max_element(p.weights.begin(), p.weights.end());
      p.capacity = std::max(p.capacity, max_w);  // every item must fit alone
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::BinPacking: {
      BinPackingPayload p;
      for (int i = 0; i < n; ++i) {
        p.sizes.push_back(static_cast<double>(rng.uniform_int(spec.entry_lo, spec.entry_hi)));
      }
      p.capacity = spec.binpacking_capacity;
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Tsp: {
      TspPayload p;
      p.cities = sample_distinct_points(rng, n, spec.coord_lo, spec.coord_hi);
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Vrp: {
      VrpPayload p;
      auto points = sample_distinct_points(rng, n + 1, spec.coord_lo, spec.coord_hi);
      p.depot = points.back();
      points.pop_back();
      p.customers = std::move(points);
      for (int i = 0; i < n; ++i) {
        p.demands.push_back(static_cast<double>(rng.uniform_int(spec.demand_lo, spec.demand_hi)));
      }
      p.vehicle_capacity = spec.vrp_vehicle_capacity;
      p.fleet_size = spec.vrp_fleet_size > 0
                         ? spec.vrp_fleet_size
                         : auto_fleet_size(p.demands, p.vehicle_capacity);
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Jsp: {
      JspPayload p;
      p.machine_count = spec.jsp_machines;
      for (int i = 0; i < n; ++i) {
        std::vector<int> machines(static_cast<std::size_t>(p.machine_count));
        std::iota(machines.begin(), machines.end(), 0);
        shuffle(machines, rng);
        std::vector<JspOperation> ops;
        for (int m : machines) {
          ops.push_back({m, static_cast<double>(rng.uniform_int(spec.entry_lo, spec.entry_hi))});
        }
        p.jobs.push_back(std::move(ops));
      }
      inst.payload = std::move(p);
      break;
    }
  }
  check_instance(inst);
  return inst;
}

}  // namespace

std::uint64_t child_seed(std::uint64_t master_seed, TaskKind task, int size_n, int index) {
  return stable_seed({master_seed, static_cast<std::uint64_t>(task),
                      static_cast<std::uint64_t>(size_n), static_cast<std::uint64_t>(index)});
}

InstanceBatch generate(const GenSpec& spec) {
  if (spec.count < 1) throw std::invalid_argument("GenSpec.count must be >= 1");
  if (spec.size_n < 2) throw std::invalid_argument("GenSpec.size_n must be >= 2");
  if (spec.entry_lo < 1 || spec.entry_hi < spec.entry_lo) {
    throw std::invalid_argument("GenSpec entry range must be positive");
  }
  if (spec.demand_lo < 1 || spec.demand_hi < spec.demand_lo) {
    throw std::invalid_argument("GenSpec demand range must be positive");
  }
  if (spec.jsp_machines < 1 || spec.vrp_vehicle_capacity <= 0 ||
      spec.binpacking_capacity <= 0 || spec.knapsack_capacity_factor <= 0 ||
      spec.vrp_fleet_size < 0) {
    throw std::invalid_argument("GenSpec task parameters must be positive");
  }
  if (spec.task == TaskKind::Vrp || spec.task == TaskKind::Tsp) {
    const long long slots =
        static_cast<long long>(spec.coord_hi - spec.coord_lo + 1) * (spec.coord_hi - spec.coord_lo + 1);
    if (slots < spec.size_n + 1) {
      throw std::invalid_argument("coordinate grid too small for distinct points");
    }
  }
  InstanceBatch batch;
  batch.task = spec.task;
  batch.size_n = spec.size_n;
  batch.master_seed = spec.master_seed;
  batch.instances.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    batch.instances.push_back(generate_one(spec, i));
  }
  return batch;
}

namespace {

ordered_json payload_to_json(const ProblemInstance& inst) {
  ordered_json j;
  switch (inst.task) {
    case TaskKind::Assignment: {
      ordered_json rows = ordered_json::array();
      for (const auto& row : inst.assignment().cost_matrix) {
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(num(v));
        rows.push_back(std::move(r));
      }
      j["cost_matrix"] = std::move(rows);
      break;
    }
    case TaskKind::Knapsack: {
      const auto& p = inst.knapsack();
      ordered_json w = ordered_json::array(), v = ordered_json::array();
      for (double x : p.weights) w.push_back(num(x));
      for (double x : p.values) v.push_back(num(x));
      j["weights"] = std::move(w);
      j["values"] = std::move(v);
      j["capacity"] = num(p.capacity);
      break;
    }
    case TaskKind::BinPacking: {
      const auto& p = inst.bin_packing();
      ordered_json s = ordered_json::array();
      for (double x : p.sizes) s.push_back(num(x));
      j["sizes"] = std::move(s);
      j["capacity"] = num(p.capacity);
      break;
    }
    case TaskKind::Tsp: {
      ordered_json cities = ordered_json::array();
      for (const auto& c : inst.tsp().cities) cities.push_back(point_json(c));
      j["cities"] = std::move(cities);
      break;
    }
    case TaskKind::Vrp: {
      const auto& p = inst.vrp();
      j["depot"] = point_json(p.depot);
      ordered_json cust = ordered_json::array(), dem = ordered_json::array();
      for (const auto& c : p.customers) cust.push_back(point_json(c));
      for (double q : p.demands) dem.push_back(num(q));
      j["customers"] = std::move(cust);
      j["demands"] = std::move(dem);
      j["fleet_size"] = p.fleet_size;
      j["vehicle_capacity"] = num(p.vehicle_capacity);
      break;
    }
    case TaskKind::Jsp: {
      const auto& p = inst.jsp();
      j["machine_count"] = p.machine_count;
      ordered_json jobs = ordered_json::array();
      for (const auto& ops : p.jobs) {
        ordered_json row = ordered_json::array();
        for (const auto& op : ops) {
          row.push_back(ordered_json::array({op.machine, num(op.duration)}));
        }
        jobs.push_back(std::move(row));
      }
      j["jobs"] = std::move(jobs);
      break;
    }
  }
  return j;
}

double require_number(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) throw InstanceFileError(path + ": expected a number");
  return j.get<double>();
}

Point require_point(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw InstanceFileError(path + ": expected [x, y]");
  return {require_number(j[0], path + "[0]"), require_number(j[1], path + "[1]")};
}

const ordered_json& require_field(const ordered_json& j, const char* name,
                                  const std::string& path) {
  auto it = j.find(name);
  if (it == j.end()) throw InstanceFileError(path + ": missing field '" + name + "'");
  return *it;
}

ProblemInstance payload_from_json(TaskKind task, int size_n, const ordered_json& j,
                                  const std::string& path) {
  ProblemInstance inst;
  inst.task = task;
  inst.size_n = size_n;
  switch (task) {
    case TaskKind::Assignment: {
      AssignmentPayload p;
      for (std::size_t i = 0; i < require_field(j, "cost_matrix", path).size(); ++i) {
        const auto& row = j["cost_matrix"][i];
        std::vector<double> r;
        for (std::size_t k = 0; k < row.size(); ++k) {
          r.push_back(require_number(row[k], path + ".cost_matrix[" + std::to_string(i) + "][" +
                                                 std::to_string(k) + "]"));
        }
        p.cost_matrix.push_back(std::move(r));
      }
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Knapsack: {
      KnapsackPayload p;
      const auto& w = require_field(j, "weights", path);
      const auto& v = require_field(j, "values", path);
      for (std::size_t i = 0; i < w.size(); ++i) {
        p.weights.push_back(require_number(w[i], path + ".weights[" + std::to_string(i) + "]"));
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        p.values.push_back(require_number(v[i], path + ".values[" + std::to_string(i) + "]"));
      }
      p.capacity = require_number(require_field(j, "capacity", path), path + ".capacity");
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::BinPacking: {
      BinPackingPayload p;
      const auto& s = require_field(j, "sizes", path);
      for (std::size_t i = 0; i < s.size(); ++i) {
        p.sizes.push_back(require_number(s[i], path + ".sizes[" + std::to_string(i) + "]"));
      }
      p.capacity = require_number(require_field(j, "capacity", path), path + ".capacity");
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Tsp: {
      TspPayload p;
      const auto& cities = require_field(j, "cities", path);
      for (std::size_t i = 0; i < cities.size(); ++i) {
        p.cities.push_back(require_point(cities[i], path + ".cities[" + std::to_string(i) + "]"));
      }
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Vrp: {
      VrpPayload p;
      p.depot = require_point(require_field(j, "depot", path), path + ".depot");
      const auto& cust = require_field(j, "customers", path);
      for (std::size_t i = 0; i < cust.size(); ++i) {
        p.customers.push_back(
            require_point(cust[i], path + ".customers[" + std::to_string(i) + "]"));
      }
      const auto& dem = require_field(j, "demands", path);
      for (std::size_t i = 0; i < dem.size(); ++i) {
        p.demands.push_back(require_number(dem[i], path + ".demands[" + std::to_string(i) + "]"));
      }
      p.fleet_size = static_cast<int>(
          require_number(require_field(j, "fleet_size", path), path + ".fleet_size"));
      p.vehicle_capacity = require_number(require_field(j, "vehicle_capacity", path),
                                          path + ".vehicle_capacity");
      inst.payload = std::move(p);
      break;
    }
    case TaskKind::Jsp: {
      JspPayload p;
      p.machine_count = static_cast<int>(
          require_number(require_field(j, "machine_count", path), path + ".machine_count"));
      const auto& jobs = require_field(j, "jobs", path);
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::vector<JspOperation> ops;
        for (std::size_t k = 0; k < jobs[i].size(); ++k) {
          const auto& op = jobs[i][k];
          const std::string op_path =
              path + ".jobs[" + std::to_string(i) + "][" + std::to_string(k) + "]";
          if (!op.is_array() || op.size() != 2) {
            throw InstanceFileError(op_path + ": expected [machine, time]");
          }
          ops.push_back({static_cast<int>(require_number(op[0], op_path + "[0]")),
                         require_number(op[1], op_path + "[1]")});
        }
        p.jobs.push_back(std::move(ops));
      }
      inst.payload = std::move(p);
      break;
    }
  }
  return inst;
}

}  // namespace

std::string instances_to_json(const InstanceBatch& batch) {
  ordered_json root;
  root["schema_version"] = kInstanceSchemaVersion;
  root["task_kind"] = task_name(batch.task);
  root["size_n"] = batch.size_n;
  root["master_seed"] = batch.master_seed;
  ordered_json list = ordered_json::array();
  for (const auto& inst : batch.instances) {
    ordered_json j;
    j["instance_id"] = inst.instance_id;
    j["seed"] = inst.seed;
    ordered_json payload = payload_to_json(inst);
    for (auto& [key, value] : payload.items()) j[key] = std::move(value);
    list.push_back(std::move(j));
  }
  root["instances"] = std::move(list);
  return root.dump(2) + "\n";
}

InstanceBatch instances_from_json(const std::string& text) {
  ordered_json root;
  try {
    root = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceFileError(std::string("malformed instance file: ") + e.what());
  }
  const auto& version = require_field(root, "schema_version", "$");
  if (!version.is_number_integer() || version.get<int>() != kInstanceSchemaVersion) {
    throw SchemaVersionError("unsupported schema_version " + version.dump() + " (expected " +
                             std::to_string(kInstanceSchemaVersion) + ")");
  }
  InstanceBatch batch;
  const auto& kind = require_field(root, "task_kind", "$");
  if (!kind.is_string()) throw InstanceFileError("$.task_kind: expected a string");
  try {
    batch.task = task_from_name(kind.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InstanceFileError(std::string("$.task_kind: ") + e.what());
  }
  batch.size_n = static_cast<int>(require_number(require_field(root, "size_n", "$"), "$.size_n"));
  const auto& seed = require_field(root, "master_seed", "$");
  if (!seed.is_number()) throw InstanceFileError("$.master_seed: expected a number");
  batch.master_seed = seed.get<std::uint64_t>();
  const auto& list = require_field(root, "instances", "$");
  if (!list.is_array()) throw InstanceFileError("$.instances: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "$.instances[" + std::to_string(i) + "]";
    const auto& j = list[i];
    ProblemInstance inst = payload_from_json(batch.task, batch.size_n, j, path);
    const auto& id = require_field(j, "instance_id", path);
    if (!id.is_string()) throw InstanceFileError(path + ".instance_id: expected a string");
    inst.instance_id = id.get<std::string>();
    const auto& iseed = require_field(j, "seed", path);
    if (!iseed.is_number()) throw InstanceFileError(path + ".seed: expected a number");
    inst.seed = iseed.get<std::uint64_t>();
    try {
      check_instance(inst);
    } catch (const std::invalid_argument& e) {
      throw InstanceFileError(path + "." + e.what());
    }
    batch.instances.push_back(std::move(inst));
  }
  return batch;
}

void save_instances(const InstanceBatch& batch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceFileError("cannot open for writing: " + path);
  out << instances_to_json(batch);
  if (!out) throw InstanceFileError("write failed: " + path);
}

InstanceBatch load_instances(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceFileError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instances_from_json(buf.str());
}

}  // namespace sgebench
