#include "sgebench/backend.hpp"

#include "sgebench/backend_cache.hpp"
#include "sgebench/backend_live.hpp"
#include "sgebench/backend_scripted.hpp"
#include "sgebench/heuristics.hpp"
#include "sgebench/instance_gen.hpp"
#include "sgebench/prompts.hpp"
#include "sgebench/strategies.hpp"

#include <doctest.h>

#include <filesystem>

#include "test_util.hpp"

using namespace sgebench;
using namespace sgebench::testutil;

namespace {

ProblemInstance seeded_tsp(int n = 5) {
  GenSpec spec;
  spec.task = TaskKind::Tsp;
  spec.size_n = n;
  spec.count = 1;
  spec.master_seed = 42;
  return generate(spec).instances[0];
}

GenRequest user_request(std::string content, std::string tag = "test") {
  GenRequest req;
  req.tag = std::move(tag);
  req.messages.push_back({Role::User, std::move(content)});
  return req;
}

class CountingBackend final : public Backend {
 public:
  explicit CountingBackend(Backend& upstream) : upstream_(&upstream) {}
  std::string complete(const GenRequest& request) override {
    calls += 1;
    return upstream_->complete(request);
  }
  bool deterministic() const override { return upstream_->deterministic(); }
  int calls = 0;

 private:
  Backend* upstream_;
};

}  // namespace

TEST_CASE("session transcript counts calls with increasing indices") {
  const auto inst = seeded_tsp();
  ScriptedBackend backend(inst);
  Session session(backend);
  const std::string prompt = render_problem(inst);
  session.generate(user_request(prompt, "io"));
  session.generate(user_request(prompt + "\n" + meta::kExplore, "explore"));
  CHECK(session.calls() == 2);
  const auto& entries = session.transcript().entries;
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].call_index == 1);
  CHECK(entries[1].call_index == 2);
  CHECK(entries[0].timestamp_ms == 0);  // deterministic backend
  CHECK(entries[1].request.tag == "explore");
}

TEST_CASE("session rejects malformed requests") {
  const auto inst = seeded_tsp();
  ScriptedBackend backend(inst);
  Session session(backend);
  GenRequest empty;
  CHECK_THROWS_AS(session.generate(std::move(empty)), std::invalid_argument);
  GenRequest hot = user_request("x");
  hot.temperature = 3.0;
  CHECK_THROWS_AS(session.generate(std::move(hot)), std::invalid_argument);
}

TEST_CASE("scripted backend recognizes the five meta prompts") {
  const auto inst = seeded_tsp();
  ScriptedBackend backend(inst);
  const std::string prompt = render_problem(inst);

  SUBCASE("exploration lists methods, nearest neighbor first") {
    const std::string response = backend.complete(user_request(prompt + "\n" + meta::kExplore));
    CHECK(response.rfind("Nearest Neighbor Algorithm\n", 0) == 0);
  }
  SUBCASE("decomposition returns the method's steps") {
    const std::string response = backend.complete(user_request(
        prompt + "\nMethod: Nearest Neighbor Algorithm\n" + meta::kDecompose));
    CHECK(response.find("Select a Starting Point") != std::string::npos);
    CHECK(response.find("Return to the Starting Point") != std::string::npos);
  }
  SUBCASE("checks answer yes below the threshold, no above") {
    CHECK(backend.complete(user_request(std::string("Select a Starting Point\n") +
                                        meta::kCheck)) == "yes");
    const std::string lengthy(500, 'x');
    CHECK(backend.complete(user_request(lengthy + "\n" + meta::kCheck)) == "no");
  }
  SUBCASE("integration picks the best embedded candidate") {
    const Solution nn = nearest_neighbor(inst, 0);
    const Solution improved = two_opt(inst, nn);
    const std::string request_text = prompt + "\nFindings:\n[Trajectory 1] SOLUTION: " +
                                     encode_solution(nn) + "\n[Trajectory 2] SOLUTION: " +
                                     encode_solution(improved) + "\n" + meta::kIntegrate;
    const std::string response = backend.complete(user_request(request_text));
    const ParseResult parsed = parse_answer(response, inst);
    REQUIRE(parsed.solution);
    CHECK(encode_solution(*parsed.solution) == encode_solution(improved));
  }
  SUBCASE("feedback suggests the exchange move on routing tasks") {
    const std::string response = backend.complete(
        user_request(prompt + "\nSubtask: x\nProposed solution:\nSOLUTION: [0, 1, 2, 3, 4]\n" +
                     meta::kFeedback));
    CHECK(response == ScriptedBackend::two_opt_suggestion());
  }
}

TEST_CASE("scripted refine applies 2-opt to the embedded candidate") {
  const auto square = make_tsp({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  ScriptedBackend backend(square);
  const std::string prompt = render_problem(square);
  const std::string crossing = "[0, 2, 1, 3]";
  const std::string response = backend.complete(
      user_request(prompt + "\nCurrent solution:\nSOLUTION: " + crossing + "\nFeedback:\n" +
                   ScriptedBackend::two_opt_suggestion() + "\nRefine the solution."));
  const ParseResult parsed = parse_answer(response, square);
  REQUIRE(parsed.solution);
  CHECK(evaluate(square, *parsed.solution).value == doctest::Approx(40.0));
}

TEST_CASE("scripted non-routing feedback echoes the candidate through refine") {
  const auto inst = make_knapsack({2, 3, 4}, {3, 4, 5}, 6);
  ScriptedBackend backend(inst);
  const std::string prompt = render_problem(inst);
  const std::string feedback = backend.complete(
      user_request(prompt + "\nSubtask: pack\nProposed solution:\nSOLUTION: [0, 1]\n" +
                   meta::kFeedback));
  CHECK(feedback == "No further improvement.");
  const std::string refined = backend.complete(user_request(
      prompt + "\nCurrent solution:\nSOLUTION: [0, 1]\nFeedback:\n" + feedback + "\nRefine."));
  const ParseResult parsed = parse_answer(refined, inst);
  REQUIRE(parsed.solution);
  CHECK(parsed.solution->selection().items == std::vector<int>{0, 1});
}

TEST_CASE("scripted direct answers are the construction heuristics") {
  GenSpec spec;
  spec.count = 1;
  spec.size_n = 6;
  spec.master_seed = 9;
  for (TaskKind task : kAllTasks) {
    spec.task = task;
    const auto inst = generate(spec).instances[0];
    ScriptedBackend backend(inst);
    const std::string response = backend.complete(user_request(render_problem(inst), "io"));
    const ParseResult parsed = parse_answer(response, inst);
    CAPTURE(task_name(task));
    REQUIRE(parsed.solution);
    CHECK(validate(inst, *parsed.solution).ok);
  }
}

TEST_CASE("every scripted step passes the default simplicity threshold") {
  const ScriptedPolicy policy;
  for (TaskKind task : kAllTasks) {
    for (const auto& method : ScriptedBackend::method_menu(task)) {
      for (const auto& step : ScriptedBackend::method_steps(task, method)) {
        CAPTURE(step);
        CHECK(static_cast<int>(step.size()) < policy.check_threshold_chars);
      }
    }
  }
}

TEST_CASE("scripted backend raises on unrecognized shapes") {
  const auto inst = seeded_tsp();
  ScriptedBackend backend(inst);
  CHECK_THROWS_AS(backend.complete(user_request("please write a poem")), ScriptedBackendError);
}

TEST_CASE("adversarial policy always answers no") {
  const auto inst = seeded_tsp();
  ScriptedPolicy policy;
  policy.check_mode = ScriptedPolicy::CheckMode::AlwaysNo;
  ScriptedBackend backend(inst, policy);
  CHECK(backend.complete(user_request(std::string("Select a Starting Point\n") + meta::kCheck)) ==
        "no");
}

TEST_CASE("cache layer is transparent and hits on repeats") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sgebench_test_cache";
  fs::remove_all(dir);

  const auto inst = seeded_tsp();
  ScriptedBackend scripted(inst);
  CountingBackend counter(scripted);
  CachingBackend cache(dir.string(), counter, "scripted-model");

  const GenRequest req = user_request(render_problem(inst), "io");
  const std::string first = cache.complete(req);
  const std::string second = cache.complete(req);
  CHECK(first == second);
  CHECK(counter.calls == 1);
  CHECK(cache.hits() == 1);
  CHECK(cache.misses() == 1);
  CHECK(first == scripted.complete(req));  // transparent

  // Different request, different key.
  cache.complete(user_request(render_problem(inst) + "\n" + meta::kExplore));
  CHECK(counter.calls == 2);
  fs::remove_all(dir);
}

TEST_CASE("cache keys separate models and temperatures") {
  GenRequest req = user_request("hello");
  const std::string base = CachingBackend::cache_key("m1", req);
  CHECK(base == CachingBackend::cache_key("m1", req));
  CHECK(base != CachingBackend::cache_key("m2", req));
  GenRequest warm = user_request("hello");
  warm.temperature = 0.7;
  CHECK(base != CachingBackend::cache_key("m1", warm));
  CHECK(base.size() == 64);  // 256-bit hex
}

TEST_CASE("live backend reports attempts after an unreachable host") {
  LiveBackendConfig cfg;
  cfg.base_url = "http://127.0.0.1:9/v1";  // nothing listens here
  cfg.max_retries = 1;
  cfg.timeout_seconds = 2;
  cfg.rate_limit_per_min = 100000;
  LiveBackend backend(cfg);
  try {
    backend.complete(user_request("ping"));
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK(e.attempts == 2);
  }
}
