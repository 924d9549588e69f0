#include "sgebench/sge.hpp"

#include "sgebench/prompts.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace sgebench {

std::vector<std::string> split_lines(const std::string& response, int cap) {
  std::vector<std::string> out;
  std::istringstream is(response);
  for (std::string line; std::getline(is, line);) {
    std::size_t b = 0;
    std::size_t e = line.size();
    while (b < e && std::isspace(static_cast<unsigned char>(line[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(line[e - 1]))) --e;
    std::string item = line.substr(b, e - b);
    // Leading enumeration markers: digits followed by '.' or ')', or a
    // bullet ('-', '*', UTF-8 •).
    std::size_t p = 0;
    while (p < item.size() && std::isdigit(static_cast<unsigned char>(item[p]))) ++p;
    if (p > 0 && p < item.size() && (item[p] == '.' || item[p] == ')')) {
      item.erase(0, p + 1);
    } else if (!item.empty() && (item[0] == '-' || item[0] == '*')) {
      item.erase(0, 1);
    } else if (item.size() >= 3 && item.compare(0, 3, "\xE2\x80\xA2") == 0) {
      item.erase(0, 3);
    }
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) {
      item.erase(item.begin());
    }
    if (item.empty()) continue;
    out.push_back(std::move(item));
  }
  if (cap >= 0 && static_cast<int>(out.size()) > cap) {
    out.resize(static_cast<std::size_t>(cap));
  }
  return out;
}

namespace {

struct Engine {
  Session& session;
  const SgeConfig& cfg;
  std::vector<std::string>& events;
  std::vector<TrajectoryState>& top_trajectories;
  int top_thoughts = 0;

  GenRequest make_request(std::string tag, std::string content) const {
    GenRequest req;
    req.tag = std::move(tag);
    req.temperature = cfg.temperature;
    req.max_tokens = cfg.max_tokens;
    req.messages.push_back({Role::User, std::move(content)});
    return req;
  }

  std::string clip_thought(std::string thought) {
    if (static_cast<int>(thought.size()) > cfg.thought_char_budget) {
      thought.erase(0, thought.size() - static_cast<std::size_t>(cfg.thought_char_budget));
      events.push_back("truncation:thought");
    }
    return thought;
  }

  struct LevelResult {
    std::string final_text;  // the integration response
    int predicted_calls = 0;
  };

  // One full run of the five phases on `problem`. Depth starts at 1.
  LevelResult run_level(const std::string& problem, int depth) {
    LevelResult result;

    const std::string explore_response =
        session.generate(make_request("explore", problem + "\n" + meta::kExplore));
    result.predicted_calls += 1;
    std::vector<std::string> methods = split_lines(explore_response, -1);
    if (static_cast<int>(methods.size()) > cfg.max_trajectories) {
      methods.resize(static_cast<std::size_t>(cfg.max_trajectories));
      events.push_back("truncation:trajectories");
    }

    std::vector<std::string> final_thoughts;
    for (std::size_t n = 0; n < methods.size(); ++n) {
      TrajectoryState traj;
      traj.method_name = methods[n];
      traj.depth = depth;
      const std::string traj_tag = std::to_string(n + 1);

      const std::string decomp_response = session.generate(make_request(
          "decomp:" + traj_tag, problem + "\nMethod: " + methods[n] + "\n" + meta::kDecompose));
      result.predicted_calls += 1;
      auto subtasks = split_lines(decomp_response, -1);
      if (static_cast<int>(subtasks.size()) > cfg.max_subtasks) {
        subtasks.resize(static_cast<std::size_t>(cfg.max_subtasks));
        events.push_back("truncation:subtasks");
      }
      traj.subtask_queries = subtasks;

      std::string prev_thought;
      for (std::size_t k = 0; k < subtasks.size(); ++k) {
        const std::string sub_tag = traj_tag + "." + std::to_string(k + 1);
        bool simple = true;
        if (depth < cfg.max_depth) {
          const std::string check_response = session.generate(
              make_request("check:" + sub_tag, subtasks[k] + "\n" + meta::kCheck));
          result.predicted_calls += 1;
          std::string head = check_response.substr(0, 3);
          for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          simple = head.rfind("yes", 0) == 0;
        }

        std::string thought;
        if (simple) {
          std::string content = problem;
          if (!prev_thought.empty()) content += "\nPrevious findings:\n" + prev_thought;
          content += "\nCurrent subtask: " + subtasks[k];
          thought = session.generate(make_request("exec:" + sub_tag, std::move(content)));
          result.predicted_calls += 1;
        } else {
          events.push_back("recursion:depth" + std::to_string(depth + 1) + ":" + sub_tag);
          std::string nested_problem =
              prev_thought.empty() ? subtasks[k] : prev_thought + "\n" + subtasks[k];
          LevelResult nested = run_level(nested_problem, depth + 1);
          thought = std::move(nested.final_text);
          result.predicted_calls += nested.predicted_calls;
        }

        for (int r = 0; r < cfg.refine_rounds; ++r) {
          const std::string round_tag = sub_tag + "." + std::to_string(r + 1);
          const std::string feedback = session.generate(make_request(
              "feedback:" + round_tag, problem + "\nSubtask: " + subtasks[k] +
                                           "\nProposed solution:\n" + thought + "\n" +
                                           meta::kFeedback));
          thought = session.generate(
              make_request("refine:" + round_tag, problem + "\nCurrent solution:\n" + thought +
                                                      "\nFeedback:\n" + feedback +
                                                      "\nRefine the solution."));
          result.predicted_calls += 2;
        }

        thought = clip_thought(std::move(thought));
        traj.thoughts.push_back(thought);
        prev_thought = thought;
        if (depth == 1) top_thoughts += 1;
      }

      if (!traj.thoughts.empty()) final_thoughts.push_back(traj.thoughts.back());
      if (depth == 1) top_trajectories.push_back(std::move(traj));
    }

    std::string content = problem + "\nFindings:";
    for (std::size_t n = 0; n < final_thoughts.size(); ++n) {
      content += "\n[Trajectory " + std::to_string(n + 1) + "] " + final_thoughts[n];
    }
    content += "\n" + std::string(meta::kIntegrate);
    result.final_text = session.generate(make_request("integrate", std::move(content)));
    result.predicted_calls += 1;
    return result;
  }
};

}  // namespace

StrategyOutcome run_sge(const ProblemInstance& inst, Backend& backend, const SgeConfig& cfg) {
  if (cfg.max_trajectories < 1 || cfg.max_subtasks < 1 || cfg.max_depth < 1 ||
      cfg.refine_rounds < 0) {
    throw std::invalid_argument("SgeConfig: caps must be >= 1 and refine_rounds >= 0");
  }
  const std::string problem = render_problem(inst);
  Session session(backend);
  StrategyOutcome outcome;

  Engine engine{session, cfg, outcome.events, outcome.trajectories};
  Engine::LevelResult top;
  detail::FinalAnswer final_answer;
  try {
    top = engine.run_level(problem, 1);
    outcome.thought_count = engine.top_thoughts;
    final_answer =
        detail::resolve_final_answer(inst, session, top.final_text, problem, 2, outcome.events);
  } catch (const BackendError& e) {
    throw StrategyError(e.what(), session.take_transcript(), std::move(outcome.trajectories));
  }
  outcome.solution = std::move(final_answer.solution);
  outcome.invalid = final_answer.invalid;
  outcome.cost = benchmark_cost(inst, outcome.solution);
  outcome.predicted_calls = top.predicted_calls + final_answer.repair_calls;
  outcome.calls = session.calls();
  if (outcome.predicted_calls != outcome.calls) {
    throw std::logic_error("call accounting mismatch: predicted " +
                           std::to_string(outcome.predicted_calls) + ", transcript " +
                           std::to_string(outcome.calls));
  }
  outcome.transcript = session.take_transcript();
  return outcome;
}

}  // namespace sgebench
