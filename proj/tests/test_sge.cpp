#include "sgebench/sge.hpp"

#include "sgebench/backend_scripted.hpp"
#include "sgebench/heuristics.hpp"
#include "sgebench/instance_gen.hpp"
#include "sgebench/strategies.hpp"

#include <doctest.h>

#include <algorithm>

using namespace sgebench;

namespace {

ProblemInstance seeded(TaskKind task, int n, std::uint64_t seed = 42) {
  GenSpec spec;
  spec.task = task;
  spec.size_n = n;
  spec.count = 1;
  spec.master_seed = seed;
  return generate(spec).instances[0];
}

std::string tag_prefix(const std::string& tag) {
  const auto colon = tag.find(':');
  return colon == std::string::npos ? tag : tag.substr(0, colon);
}

}  // namespace

TEST_CASE("split_lines strips markers, drops blanks, truncates") {
  CHECK(split_lines("1. A\n2. B\n", -1) == std::vector<std::string>{"A", "B"});
  CHECK(split_lines("A\n\n\nB", -1) == std::vector<std::string>{"A", "B"});
  CHECK(split_lines("- first\n* second\n\xE2\x80\xA2 third", -1) ==
        std::vector<std::string>{"first", "second", "third"});
  std::string twelve;
  for (int i = 0; i < 12; ++i) twelve += "line " + std::to_string(i) + "\n";
  CHECK(split_lines(twelve, 10).size() == 10);
  CHECK(split_lines("  3) spaced  ", -1) == std::vector<std::string>{"spaced"});
}

TEST_CASE("single-trajectory scripted tsp run: 23 calls, two_opt(nn) tour") {
  const auto inst = seeded(TaskKind::Tsp, 6);
  ScriptedBackend backend(inst);
  SgeConfig cfg;
  cfg.max_trajectories = 1;
  cfg.refine_rounds = 1;
  const auto outcome = run_sge(inst, backend, cfg);
  // 1 explore + 1 decomp + 5 subtasks * (check + exec + feedback + refine) + 1 integrate
  CHECK(outcome.calls == 23);
  CHECK(outcome.predicted_calls == 23);
  CHECK(outcome.thought_count == 5);
  REQUIRE(outcome.trajectories.size() == 1);
  CHECK(outcome.trajectories[0].method_name == "Nearest Neighbor Algorithm");
  CHECK(outcome.trajectories[0].subtask_queries.size() == 5);

  const Solution expected = two_opt(inst, nearest_neighbor(inst, 0));
  CHECK(outcome.cost.value == doctest::Approx(evaluate(inst, expected).value));
  CHECK_FALSE(outcome.invalid);
}

TEST_CASE("trajectory cap truncates the tsp menu of five methods") {
  const auto inst = seeded(TaskKind::Tsp, 5);
  ScriptedBackend backend(inst);
  SgeConfig cfg;
  cfg.max_trajectories = 4;
  const auto outcome = run_sge(inst, backend, cfg);
  CHECK(outcome.trajectories.size() == 4);
  CHECK(std::count(outcome.events.begin(), outcome.events.end(), "truncation:trajectories") == 1);
}

TEST_CASE("predicted calls match the closed form on every task") {
  SgeConfig cfg;  // defaults: N=4, K=10, D=2, rounds=1
  for (TaskKind task : kAllTasks) {
    const auto inst = seeded(task, 5, 7);
    ScriptedBackend backend(inst);
    const auto outcome = run_sge(inst, backend, cfg);
    int subtasks = 0;
    for (const auto& t : outcome.trajectories) {
      subtasks += static_cast<int>(t.subtask_queries.size());
    }
    const int n_traj = static_cast<int>(outcome.trajectories.size());
    const int expected = 1 + n_traj + subtasks * (2 + 2 * cfg.refine_rounds) + 1;
    CAPTURE(task_name(task));
    CHECK(outcome.calls == expected);
    CHECK(outcome.predicted_calls == expected);
    CHECK(outcome.thought_count == subtasks);
    CHECK_FALSE(outcome.invalid);
    CHECK(validate(inst, outcome.solution).ok);
  }
}

TEST_CASE("phase ordering is total: explore, (decomp, (check, exec, feedback, refine)*)*, integrate") {
  const auto inst = seeded(TaskKind::Jsp, 4);
  ScriptedBackend backend(inst);
  SgeConfig cfg;
  const auto outcome = run_sge(inst, backend, cfg);

  std::vector<std::string> expected_tags = {"explore"};
  for (std::size_t n = 0; n < outcome.trajectories.size(); ++n) {
    expected_tags.push_back("decomp");
    for (std::size_t k = 0; k < outcome.trajectories[n].subtask_queries.size(); ++k) {
      expected_tags.push_back("check");
      expected_tags.push_back("exec");
      for (int r = 0; r < cfg.refine_rounds; ++r) {
        expected_tags.push_back("feedback");
        expected_tags.push_back("refine");
      }
    }
  }
  expected_tags.push_back("integrate");

  std::vector<std::string> actual;
  for (const auto& entry : outcome.transcript.entries) {
    actual.push_back(tag_prefix(entry.request.tag));
  }
  CHECK(actual == expected_tags);
}

TEST_CASE("adversarial always-no policy recurses exactly once and terminates") {
  const auto inst = seeded(TaskKind::Knapsack, 5);
  ScriptedPolicy policy;
  policy.check_mode = ScriptedPolicy::CheckMode::AlwaysNo;
  ScriptedBackend backend(inst, policy);
  SgeConfig cfg;
  cfg.max_trajectories = 2;
  cfg.max_subtasks = 3;
  cfg.refine_rounds = 0;
  cfg.max_depth = 2;
  const auto outcome = run_sge(inst, backend, cfg);

  int depth2 = 0, deeper = 0;
  for (const auto& e : outcome.events) {
    if (e.rfind("recursion:depth2", 0) == 0) depth2 += 1;
    if (e.rfind("recursion:depth3", 0) == 0 || e.rfind("recursion:depth4", 0) == 0) deeper += 1;
  }
  int top_subtasks = 0;
  for (const auto& t : outcome.trajectories) {
    top_subtasks += static_cast<int>(t.subtask_queries.size());
  }
  CHECK(depth2 == top_subtasks);  // every top-level check said no
  CHECK(deeper == 0);             // depth bound respected
  CHECK(validate(inst, outcome.solution).ok);
  CHECK(outcome.predicted_calls == outcome.calls);
}

TEST_CASE("deeper bounds recurse further but never beyond D") {
  const auto inst = seeded(TaskKind::BinPacking, 5);
  ScriptedPolicy policy;
  policy.check_mode = ScriptedPolicy::CheckMode::AlwaysNo;
  ScriptedBackend backend(inst, policy);
  SgeConfig cfg;
  cfg.max_trajectories = 1;
  cfg.max_subtasks = 2;
  cfg.refine_rounds = 0;
  cfg.max_depth = 3;
  const auto outcome = run_sge(inst, backend, cfg);
  bool saw_depth3 = false;
  for (const auto& e : outcome.events) {
    CHECK(e.rfind("recursion:depth4", 0) != 0);
    if (e.rfind("recursion:depth3", 0) == 0) saw_depth3 = true;
  }
  CHECK(saw_depth3);
  CHECK(validate(inst, outcome.solution).ok);
}

TEST_CASE("sge beats or ties single-sample io on scripted routing tasks") {
  SgeConfig cfg;
  for (TaskKind task : {TaskKind::Tsp, TaskKind::Vrp}) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const auto inst = seeded(task, 8, seed);
      ScriptedBackend backend(inst);
      const auto sge = run_sge(inst, backend, cfg);
      ScriptedBackend io_backend(inst);
      const auto io = run_io(inst, io_backend, 1);
      CAPTURE(task_name(task));
      CHECK(sge.cost.value <= io.cost.value + 1e-9);
    }
  }
}

TEST_CASE("scripted jsp integration takes the better dispatching rule") {
  for (std::uint64_t seed : {4ULL, 5ULL, 6ULL}) {
    const auto inst = seeded(TaskKind::Jsp, 6, seed);
    ScriptedBackend backend(inst);
    SgeConfig cfg;
    const auto outcome = run_sge(inst, backend, cfg);
    const double spt = evaluate(inst, dispatch_jsp(inst, DispatchRule::SPT)).value;
    const double mwr = evaluate(inst, dispatch_jsp(inst, DispatchRule::MWR)).value;
    CHECK(outcome.cost.value == doctest::Approx(std::min(spt, mwr)));
  }
}

namespace {

class QueueBackend final : public Backend {
 public:
  explicit QueueBackend(std::vector<std::string> responses)
      : responses_(std::move(responses)) {}
  std::string complete(const GenRequest&) override {
    if (next_ >= responses_.size()) throw BackendError("queue exhausted", 1);
    return responses_[next_++];
  }
  bool deterministic() const override { return true; }

 private:
  std::vector<std::string> responses_;
  std::size_t next_ = 0;
};

}  // namespace

TEST_CASE("repair re-prompts are counted and recover the run (D=1 skips checks)") {
  ProblemInstance tsp;
  tsp.task = TaskKind::Tsp;
  tsp.size_n = 3;
  tsp.instance_id = "repair-tsp";
  tsp.payload = TspPayload{{{0, 0}, {1, 0}, {2, 0}}};

  SgeConfig cfg;
  cfg.max_trajectories = 1;
  cfg.max_subtasks = 1;
  cfg.refine_rounds = 0;
  cfg.max_depth = 1;  // every check is skipped and uncounted
  QueueBackend backend({
      "Some Method",            // explore
      "only step",              // decomp
      "a thought, no answer",   // exec
      "still no answer line",   // integrate
      "SOLUTION: [0, 1, 2]",    // repair 1
  });
  const auto outcome = run_sge(tsp, backend, cfg);
  CHECK(outcome.calls == 5);  // 4 phase calls + 1 repair
  CHECK(outcome.predicted_calls == 5);
  CHECK_FALSE(outcome.invalid);
  CHECK(std::count(outcome.events.begin(), outcome.events.end(), "repair:1") == 1);
  CHECK(outcome.solution.perm().perm == std::vector<int>{0, 1, 2});
}

TEST_CASE("empty exploration degenerates to explore + integrate") {
  ProblemInstance tsp;
  tsp.task = TaskKind::Tsp;
  tsp.size_n = 3;
  tsp.instance_id = "empty-explore";
  tsp.payload = TspPayload{{{0, 0}, {1, 0}, {2, 0}}};
  SgeConfig cfg;
  QueueBackend backend({"\n", "SOLUTION: [0, 1, 2]"});
  const auto outcome = run_sge(tsp, backend, cfg);
  CHECK(outcome.calls == 2);
  CHECK(outcome.predicted_calls == 2);
  CHECK(outcome.trajectories.empty());
  CHECK_FALSE(outcome.invalid);
}

TEST_CASE("two failed repairs fall back with the invalid flag") {
  ProblemInstance tsp;
  tsp.task = TaskKind::Tsp;
  tsp.size_n = 3;
  tsp.instance_id = "fallback-tsp";
  tsp.payload = TspPayload{{{0, 0}, {1, 0}, {2, 0}}};

  SgeConfig cfg;
  cfg.max_trajectories = 1;
  cfg.max_subtasks = 1;
  cfg.refine_rounds = 0;
  cfg.max_depth = 1;
  QueueBackend backend({"m", "s", "t", "junk", "junk", "junk"});
  const auto outcome = run_sge(tsp, backend, cfg);
  CHECK(outcome.calls == 6);  // 4 phase calls + 2 repairs
  CHECK(outcome.predicted_calls == 6);
  CHECK(outcome.invalid);
  CHECK(validate(tsp, outcome.solution).ok);  // canonical fallback
}

TEST_CASE("sge runs are deterministic end to end") {
  const auto inst = seeded(TaskKind::Vrp, 7);
  SgeConfig cfg;
  ScriptedBackend b1(inst), b2(inst);
  const auto r1 = run_sge(inst, b1, cfg);
  const auto r2 = run_sge(inst, b2, cfg);
  CHECK(r1.transcript.to_jsonl() == r2.transcript.to_jsonl());
  CHECK(encode_solution(r1.solution) == encode_solution(r2.solution));
}

TEST_CASE("thoughts are clipped to the character budget") {
  const auto inst = seeded(TaskKind::Tsp, 5);
  ScriptedBackend backend(inst);
  SgeConfig cfg;
  cfg.max_trajectories = 1;
  cfg.thought_char_budget = 40;
  const auto outcome = run_sge(inst, backend, cfg);
  for (const auto& t : outcome.trajectories) {
    for (const auto& thought : t.thoughts) {
      CHECK(thought.size() <= 40);
    }
  }
  CHECK(std::count(outcome.events.begin(), outcome.events.end(), "truncation:thought") > 0);
}
