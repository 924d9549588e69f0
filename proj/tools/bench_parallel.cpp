// Compares the serial reference path against the OpenMP kernel on the three
// batch workloads: oracle solving, heuristic evaluation, and scripted
// strategy runs. Checksums must match between the two paths.

#include "sgebench/heuristics.hpp"
#include "sgebench/instance_gen.hpp"
#include "sgebench/oracle.hpp"
#include "sgebench/parallel.hpp"
#include "sgebench/runner.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <vector>

using namespace sgebench;

namespace {

struct BenchResult {
  double serial_s = 0;
  double parallel_s = 0;
  double checksum_serial = 0;
  double checksum_parallel = 0;
};

double timed(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BenchResult bench(int count, int threads, const std::function<double(int)>& work) {
  BenchResult r;
  std::vector<double> out(static_cast<std::size_t>(count), 0);
  r.serial_s = timed([&] {
    parallel_for(count, 1, [&](int i) { out[static_cast<std::size_t>(i)] = work(i); });
  });
  r.checksum_serial = std::accumulate(out.begin(), out.end(), 0.0);
  std::fill(out.begin(), out.end(), 0.0);
  r.parallel_s = timed([&] {
    parallel_for(count, threads, [&](int i) { out[static_cast<std::size_t>(i)] = work(i); });
  });
  r.checksum_parallel = std::accumulate(out.begin(), out.end(), 0.0);
  return r;
}

void report(const char* name, const BenchResult& r) {
  std::printf("%-24s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  checksums %s\n", name,
              r.serial_s, r.parallel_s, r.parallel_s > 0 ? r.serial_s / r.parallel_s : 0.0,
              r.checksum_serial == r.checksum_parallel ? "match" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  std::printf("openmp %s, %d threads requested\n", openmp_enabled() ? "on" : "off", threads);

  {
    GenSpec spec;
    spec.task = TaskKind::Tsp;
    spec.size_n = 9;
    spec.count = 40;
    spec.master_seed = 7;
    const InstanceBatch batch = generate(spec);
    report("oracle tsp n=9", bench(spec.count, threads, [&](int i) {
             return solve_exact(batch.instances[static_cast<std::size_t>(i)]).optimal_cost;
           }));
  }
  {
    GenSpec spec;
    spec.task = TaskKind::Tsp;
    spec.size_n = 30;
    spec.count = 400;
    spec.master_seed = 11;
    const InstanceBatch batch = generate(spec);
    report("two_opt tsp n=30", bench(spec.count, threads, [&](int i) {
             const auto& inst = batch.instances[static_cast<std::size_t>(i)];
             return evaluate(inst, two_opt(inst, nearest_neighbor(inst, 0))).value;
           }));
  }
  {
    GenSpec spec;
    spec.task = TaskKind::Vrp;
    spec.size_n = 20;
    spec.count = 200;
    spec.master_seed = 13;
    const InstanceBatch batch = generate(spec);
    RunOptions options;
    options.strategy = "sge";
    options.backend = "scripted";
    report("scripted sge vrp n=20", bench(spec.count, threads, [&](int i) {
             const auto& inst = batch.instances[static_cast<std::size_t>(i)];
             ScriptedBackend backend(inst);
             return run_strategy(inst, backend, options).cost.value;
           }));
  }
  return 0;
}
