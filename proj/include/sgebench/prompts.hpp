#pragma once

#include "sgebench/problems.hpp"

#include <array>
#include <string>

namespace sgebench {

// The five fixed meta-prompt instructions driving the five-phase engine.
namespace meta {
inline constexpr const char* kExplore =
    "List all possible methods to solve this problem. Return them separated by new lines.";
inline constexpr const char* kDecompose =
    "List all steps to use the method. Return them separated by new lines.";
inline constexpr const char* kCheck = "Is this problem easily solvable? Return yes or no";
inline constexpr const char* kFeedback = "Give feedback to the proposed solution";
inline constexpr const char* kIntegrate =
    "Integrate all previous findings and provide the final answer";
}  // namespace meta

// Zero-shot chain-of-thought trigger, appended before the answer contract.
inline constexpr const char* kCotTrigger = "Let's think step by step.";

// Marker prefix of the re-prompt sent after an unparseable answer.
inline constexpr const char* kRepairMarker = "Your answer was invalid because";

struct PromptBundle {
  std::string problem_text;            // goal sentence + exhaustive variable listing
  std::string answer_format_contract;  // the required SOLUTION: line for the task

  // The five fixed instruction strings, in phase order.
  static const std::array<const char*, 5>& meta_prompts() {
    static const std::array<const char*, 5> prompts = {
        meta::kExplore, meta::kDecompose, meta::kCheck, meta::kFeedback, meta::kIntegrate};
    return prompts;
  }
};
// render_problem(inst) == bundle.problem_text + bundle.answer_format_contract.

// Number rendering used in prompts and reports: integral values print without
// a decimal point, everything else with two decimals.
std::string fmt_num(double v);

// Goal sentence, full variable listing, and the answer contract on the end.
// Byte-identical for identical instances.
std::string render_problem(const ProblemInstance& instance);

PromptBundle make_prompt_bundle(const ProblemInstance& instance);

std::string answer_contract(TaskKind task);

}  // namespace sgebench
