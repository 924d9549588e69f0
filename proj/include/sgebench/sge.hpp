#pragma once

#include "sgebench/backend.hpp"
#include "sgebench/problems.hpp"
#include "sgebench/strategies.hpp"

#include <string>
#include <vector>

namespace sgebench {

struct SgeConfig {
  int max_trajectories = 4;      // N cap on exploration lines
  int max_subtasks = 10;         // K cap per trajectory
  int max_depth = 2;             // recursion depth bound, top level is depth 1
  int refine_rounds = 1;         // feedback/refine pairs per subtask
  int thought_char_budget = 4000;  // thoughts keep their newest tail
  double temperature = 0.0;
  int max_tokens = 4096;
};

// Five phases in order: one exploration call; per trajectory one
// decomposition call; per subtask a simplicity check (skipped and uncounted
// at the depth bound) plus either one execution call or a recursive run on
// prior-thought||subtask; per subtask refine_rounds feedback/refine pairs;
// one integration call parsed with the repair policy.
//
// Call identity (no recursion, no repairs):
//   1 + N + sum_n K_n * (2 + 2*refine_rounds) + 1
// The engine tracks the structural prediction (including recursion and repair
// contributions) and throws std::logic_error if it disagrees with the
// transcript count.
StrategyOutcome run_sge(const ProblemInstance& instance, Backend& backend,
                        const SgeConfig& config);

// Trims whitespace, strips leading enumeration markers ("1.", "-", "*", the
// bullet glyph), drops blanks, truncates to cap (cap < 0 means unlimited).
std::vector<std::string> split_lines(const std::string& response, int cap);

}  // namespace sgebench
