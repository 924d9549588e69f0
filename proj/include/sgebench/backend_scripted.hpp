#pragma once

#include "sgebench/backend.hpp"
#include "sgebench/problems.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sgebench {

// Raised when a request matches no known shape; a test-failure signal, never
// a guessed answer.
class ScriptedBackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScriptedPolicy {
  enum class CheckMode {
    Threshold,  // "yes" when the subtask text is below the length threshold
    AlwaysNo,   // adversarial: force recursion on every check
  };
  CheckMode check_mode = CheckMode::Threshold;
  int check_threshold_chars = 160;
};

// Deterministic stand-in for the generative model. Recognizes which
// meta-prompt a request carries by exact substring match and answers from the
// instance it was constructed with: exploration returns a fixed method menu
// per task, decomposition a fixed step list per method, subtask execution and
// integration run the matching classical heuristics, feedback suggests a
// 2-opt pass on routing tasks. Pure function of (request text, instance).
class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(ProblemInstance instance, ScriptedPolicy policy = {});

  std::string complete(const GenRequest& request) override;
  bool deterministic() const override { return true; }

  static const std::vector<std::string>& method_menu(TaskKind task);
  static std::vector<std::string> method_steps(TaskKind task, const std::string& method);

  // The fixed routing-improvement suggestion issued by feedback requests.
  static const char* two_opt_suggestion();

 private:
  ProblemInstance instance_;
  ScriptedPolicy policy_;
};

}  // namespace sgebench
