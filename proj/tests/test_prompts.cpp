#include "sgebench/prompts.hpp"

#include "sgebench/instance_gen.hpp"

#include <doctest.h>

#include <string>

#include "test_util.hpp"

using namespace sgebench;
using namespace sgebench::testutil;

TEST_CASE("meta prompt strings are pinned") {
  CHECK(std::string(meta::kExplore) ==
        "List all possible methods to solve this problem. Return them separated by new lines.");
  CHECK(std::string(meta::kDecompose) ==
        "List all steps to use the method. Return them separated by new lines.");
  CHECK(std::string(meta::kCheck) == "Is this problem easily solvable? Return yes or no");
  CHECK(std::string(meta::kFeedback) == "Give feedback to the proposed solution");
  CHECK(std::string(meta::kIntegrate) ==
        "Integrate all previous findings and provide the final answer");
  CHECK(std::string(kCotTrigger) == "Let's think step by step.");
  const auto& family = PromptBundle::meta_prompts();
  CHECK(family.size() == 5);
  CHECK(std::string(family[0]) == meta::kExplore);
  CHECK(std::string(family[4]) == meta::kIntegrate);
}

TEST_CASE("tsp rendering lists coordinates in the reference shape") {
  const auto inst = make_tsp({{0, 49}, {26, 41}, {2, 29}, {49, 15}, {0, 23}});
  const std::string text = render_problem(inst);
  CHECK(text.find("(1): (0, 49)") != std::string::npos);
  CHECK(text.find("(2): (26, 41)") != std::string::npos);
  CHECK(text.find("(5): (0, 23)") != std::string::npos);
  CHECK(text.find("minimizes the total travel distance") != std::string::npos);
  CHECK(text.find("SOLUTION:") != std::string::npos);
  // contract sits at the end
  const PromptBundle bundle = make_prompt_bundle(inst);
  CHECK(text == bundle.problem_text + bundle.answer_format_contract);
}

TEST_CASE("single-item knapsack renders one item line plus capacity") {
  const auto inst = make_knapsack({7}, {9}, 7);
  const std::string text = render_problem(inst);
  CHECK(text.find("Item 1: weight 7, value 9.") != std::string::npos);
  CHECK(text.find("The knapsack capacity is 7.") != std::string::npos);
}

TEST_CASE("rendering is deterministic and exhaustive per task") {
  GenSpec spec;
  spec.master_seed = 3;
  spec.count = 2;
  spec.size_n = 5;
  for (TaskKind task : kAllTasks) {
    spec.task = task;
    for (const auto& inst : generate(spec).instances) {
      const std::string a = render_problem(inst);
      const std::string b = render_problem(inst);
      CHECK(a == b);
      CHECK(a.find(answer_contract(task)) != std::string::npos);
    }
  }
}

TEST_CASE("numbers render as integers when integral, two decimals otherwise") {
  CHECK(fmt_num(49) == "49");
  CHECK(fmt_num(0) == "0");
  CHECK(fmt_num(114.5) == "114.50");
  CHECK(fmt_num(3.14159) == "3.14");
}
