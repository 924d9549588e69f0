#pragma once

#include "sgebench/backend.hpp"
#include "sgebench/problems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sgebench {

struct TrajectoryState {
  std::string method_name;
  std::vector<std::string> subtask_queries;
  std::vector<std::string> thoughts;
  int depth = 1;
};

struct StrategyOutcome {
  Solution solution;
  Cost cost;
  int calls = 0;
  int predicted_calls = 0;
  bool invalid = false;  // no valid answer parsed; canonical fallback used
  int thought_count = 0;
  std::vector<std::string> events;  // truncations, repairs, degenerate paths
  std::vector<TrajectoryState> trajectories;
  Transcript transcript;
};

// Backend failure mid-run, carrying everything produced so far.
class StrategyError : public std::runtime_error {
 public:
  StrategyError(const std::string& what, Transcript partial,
                std::vector<TrajectoryState> trajectories = {})
      : std::runtime_error(what), partial_transcript(std::move(partial)),
        partial_trajectories(std::move(trajectories)) {}

  Transcript partial_transcript;
  std::vector<TrajectoryState> partial_trajectories;
};

struct ParseResult {
  std::optional<Solution> solution;
  std::string error;  // set when solution is empty
};

// Scans for the last line carrying "SOLUTION:" with a parseable bracketed
// encoding; 1-based indices are normalized when every index fits [1,n] and at
// least one equals n. The parsed solution must validate.
ParseResult parse_answer(const std::string& text, const ProblemInstance& instance);

// The bracketed payload of a SOLUTION line for `solution`; parse_answer
// inverts it.
std::string encode_solution(const Solution& solution);

// Canonical representative used for majority voting: tours minimal over
// rotation+reflection, selections sorted, bins relabeled by first use, routes
// direction- and order-normalized.
Solution canonicalize(const ProblemInstance& instance, const Solution& solution);

// run_io: N independent samples of the direct prompt, majority vote over
// canonicalized valid answers; ties by count, then better cost, then
// lexicographic encoding. Zero valid answers -> canonical fallback, invalid
// flag set. Exactly n_samples calls.
StrategyOutcome run_io(const ProblemInstance& instance, Backend& backend, int n_samples);

// As run_io with the zero-shot trigger before the answer contract.
StrategyOutcome run_cot(const ProblemInstance& instance, Backend& backend, int n_samples);

// Initial answer, then per round one feedback and one refine call; keeps the
// best valid solution seen. Exactly 1 + 2*rounds calls.
StrategyOutcome run_refine(const ProblemInstance& instance, Backend& backend, int rounds);

// Call-budget form used when pairing against another strategy's call total:
// issues exactly `call_budget` calls, burning one trailing feedback call when
// the budget is even.
StrategyOutcome run_refine_budget(const ProblemInstance& instance, Backend& backend,
                                  int call_budget);

// One decomposition call on the problem itself, one call per returned step
// (capped), one integration call. 2 + min(steps, max_steps) calls; a zero-step
// decomposition degenerates to a single direct-answer call (2 calls total).
StrategyOutcome run_decomp(const ProblemInstance& instance, Backend& backend, int max_steps);

namespace detail {

// Shared answer-with-repair loop: parse `response`; on failure issue up to
// `max_repairs` re-prompts through `session` (counted calls), then fall back.
struct FinalAnswer {
  Solution solution;
  bool invalid = false;
  int repair_calls = 0;
};
FinalAnswer resolve_final_answer(const ProblemInstance& instance, Session& session,
                                 const std::string& response, const std::string& prompt_context,
                                 int max_repairs, std::vector<std::string>& events);

}  // namespace detail

}  // namespace sgebench
