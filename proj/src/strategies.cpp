#include "sgebench/strategies.hpp"

#include "sgebench/prompts.hpp"
#include "sgebench/sge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace sgebench {

namespace {

// ---------------------------------------------------------------------------
// Bracket parsing: integers/doubles, nested lists; parentheses read as lists.
// ---------------------------------------------------------------------------

struct Node {
  bool is_number = false;
  double number = 0;
  std::vector<Node> children;
};

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool parse_node(Node& out) {
    skip_ws();
    if (pos >= text.size()) return false;
    const char c = text[pos];
    if (c == '[' || c == '(') {
      const char close = c == '[' ? ']' : ')';
      ++pos;
      out.is_number = false;
      out.children.clear();
      skip_ws();
      if (pos < text.size() && text[pos] == close) {
        ++pos;
        return true;
      }
      for (;;) {
        Node child;
        if (!parse_node(child)) return false;
        out.children.push_back(std::move(child));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == close) {
          ++pos;
          return true;
        }
        return false;
      }
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
      char* endp = nullptr;
      const double v = std::strtod(text.c_str() + pos, &endp);
      const std::size_t end = static_cast<std::size_t>(endp - text.c_str());
      if (end == pos) return false;
      out.is_number = true;
      out.number = v;
      pos = end;
      return true;
    }
    return false;
  }
};

bool all_numbers(const Node& n) {
  for (const auto& c : n.children) {
    if (!c.is_number) return false;
  }
  return true;
}

bool is_integral(double v) { return std::floor(v) == v; }

// 1-based detection: every index in [1, n] and at least one equals n.
void normalize_indices(std::vector<int>& idx, int n) {
  if (idx.empty()) return;
  bool any_n = false;
  for (int v : idx) {
    if (v < 1 || v > n) return;
    if (v == n) any_n = true;
  }
  if (!any_n) return;
  for (int& v : idx) v -= 1;
}

ParseResult fail(const std::string& why) { return ParseResult{std::nullopt, why}; }

ParseResult decode_payload(const Node& root, const ProblemInstance& inst) {
  const int n = inst.size_n;
  Solution sol;
  sol.task = inst.task;
  switch (inst.task) {
    case TaskKind::Assignment:
    case TaskKind::Tsp: {
      if (!all_numbers(root)) return fail("expected a flat integer list");
      std::vector<int> perm;
      for (const auto& c : root.children) {
        if (!is_integral(c.number)) return fail("expected integer indices");
        perm.push_back(static_cast<int>(c.number));
      }
      normalize_indices(perm, n);
      sol.encoding = PermSolution{std::move(perm)};
      break;
    }
    case TaskKind::Knapsack: {
      if (!all_numbers(root)) return fail("expected a flat integer list");
      std::vector<int> items;
      for (const auto& c : root.children) {
        if (!is_integral(c.number)) return fail("expected integer indices");
        items.push_back(static_cast<int>(c.number));
      }
      normalize_indices(items, n);
      std::sort(items.begin(), items.end());
      sol.encoding = SelectionSolution{std::move(items)};
      break;
    }
    case TaskKind::BinPacking: {
      if (!all_numbers(root)) return fail("expected a flat integer list");
      std::vector<int> bin_of;
      for (const auto& c : root.children) {
        if (!is_integral(c.number)) return fail("expected integer bin indices");
        bin_of.push_back(static_cast<int>(c.number));
      }
      normalize_indices(bin_of, n);
      sol.encoding = BinSolution{std::move(bin_of)};
      break;
    }
    case TaskKind::Vrp: {
      std::vector<std::vector<int>> routes;
      std::vector<int> flat;
      for (const auto& route : root.children) {
        if (route.is_number) return fail("expected a list of routes");
        if (!all_numbers(route)) return fail("routes must hold integer customer indices");
        std::vector<int> r;
        for (const auto& c : route.children) {
          if (!is_integral(c.number)) return fail("expected integer customer indices");
          r.push_back(static_cast<int>(c.number));
          flat.push_back(static_cast<int>(c.number));
        }
        routes.push_back(std::move(r));
      }
      normalize_indices(flat, n);
      std::size_t k = 0;
      for (auto& r : routes) {
        for (int& v : r) v = flat[k++];
      }
      sol.encoding = RoutesSolution{std::move(routes)};
      break;
    }
    case TaskKind::Jsp: {
      const auto& jobs = inst.jsp().jobs;
      const int m = inst.jsp().machine_count;
      std::vector<int> job_idx, op_idx;
      std::vector<double> starts;
      for (const auto& triple : root.children) {
        if (triple.is_number || triple.children.size() != 3 || !all_numbers(triple)) {
          return fail("expected (job, operation, start) triples");
        }
        if (!is_integral(triple.children[0].number) || !is_integral(triple.children[1].number)) {
          return fail("job and operation must be integers");
        }
        job_idx.push_back(static_cast<int>(triple.children[0].number));
        op_idx.push_back(static_cast<int>(triple.children[1].number));
        starts.push_back(triple.children[2].number);
      }
      normalize_indices(job_idx, n);
      normalize_indices(op_idx, m);
      std::vector<std::vector<double>> start(static_cast<std::size_t>(n));
      std::vector<std::vector<char>> seen(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        start[static_cast<std::size_t>(i)].assign(jobs[static_cast<std::size_t>(i)].size(), 0);
        seen[static_cast<std::size_t>(i)].assign(jobs[static_cast<std::size_t>(i)].size(), 0);
      }
      for (std::size_t k = 0; k < job_idx.size(); ++k) {
        const int i = job_idx[k], j = op_idx[k];
        if (i < 0 || i >= n || j < 0 || j >= static_cast<int>(start[static_cast<std::size_t>(i)].size())) {
          return fail("triple indices out of range");
        }
        if (seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          return fail("duplicate (job, operation) triple");
        }
        seen[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        start[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = starts[k];
      }
      for (int i = 0; i < n; ++i) {
        for (char s : seen[static_cast<std::size_t>(i)]) {
          if (!s) return fail("missing (job, operation) triple");
        }
      }
      sol.encoding = ScheduleSolution{std::move(start)};
      break;
    }
  }
  const ValidationResult check = validate(inst, sol);
  if (!check.ok) return fail(check.violations[0]);
  return ParseResult{std::move(sol), {}};
}

}  // namespace

ParseResult parse_answer(const std::string& text, const ProblemInstance& inst) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  std::string last_error = "no SOLUTION line found";
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const std::size_t at = it->find("SOLUTION:");
    if (at == std::string::npos) continue;
    const std::string payload = it->substr(at + 9);
    Parser parser{payload, 0};
    Node root;
    if (!parser.parse_node(root) || root.is_number) continue;  // not a bracketed encoding
    ParseResult result = decode_payload(root, inst);
    if (result.solution) return result;
    last_error = result.error;
    return fail(last_error);
  }
  return fail(last_error);
}

std::string encode_solution(const Solution& sol) {
  std::ostringstream os;
  auto put_list = [&os](const std::vector<int>& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ", ";
      os << v[i];
    }
    os << "]";
  };
  switch (sol.task) {
    case TaskKind::Assignment:
    case TaskKind::Tsp:
      put_list(sol.perm().perm);
      break;
    case TaskKind::Knapsack:
      put_list(sol.selection().items);
      break;
    case TaskKind::BinPacking:
      put_list(sol.bins().bin_of);
      break;
    case TaskKind::Vrp: {
      os << "[";
      const auto& routes = sol.routes().routes;
      for (std::size_t r = 0; r < routes.size(); ++r) {
        if (r) os << ", ";
        put_list(routes[r]);
      }
      os << "]";
      break;
    }
    case TaskKind::Jsp: {
      os << "[";
      const auto& start = sol.schedule().start;
      bool first = true;
      for (std::size_t i = 0; i < start.size(); ++i) {
        for (std::size_t j = 0; j < start[i].size(); ++j) {
          if (!first) os << ", ";
          first = false;
          os << "(" << i << ", " << j << ", ";
          const double s = start[i][j];
          if (std::floor(s) == s && std::abs(s) < 1e15) {
            os << static_cast<long long>(s);
          } else {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", s);
            os << buf;
          }
          os << ")";
        }
      }
      os << "]";
      break;
    }
  }
  return os.str();
}

Solution canonicalize(const ProblemInstance& inst, const Solution& sol) {
  switch (inst.task) {
    case TaskKind::Assignment:
    case TaskKind::Jsp:
      return sol;
    case TaskKind::Knapsack: {
      auto items = sol.selection().items;
      std::sort(items.begin(), items.end());
      return Solution{sol.task, SelectionSolution{std::move(items)}};
    }
    case TaskKind::BinPacking: {
      const auto& bin_of = sol.bins().bin_of;
      std::vector<int> relabel(bin_of.size(), -1);
      std::vector<int> out;
      int next = 0;
      for (int b : bin_of) {
        if (relabel[static_cast<std::size_t>(b)] < 0) relabel[static_cast<std::size_t>(b)] = next++;
        out.push_back(relabel[static_cast<std::size_t>(b)]);
      }
      return Solution{sol.task, BinSolution{std::move(out)}};
    }
    case TaskKind::Tsp: {
      const auto& tour = sol.perm().perm;
      const std::size_t n = tour.size();
      std::vector<int> best = tour;
      for (int dir = 0; dir < 2; ++dir) {
        std::vector<int> t = tour;
        if (dir) std::reverse(t.begin(), t.end());
        for (std::size_t r = 0; r < n; ++r) {
          std::vector<int> rot(t.begin() + static_cast<long>(r), t.end());
          rot.insert(rot.end(), t.begin(), t.begin() + static_cast<long>(r));
          if (rot < best) best = rot;
        }
      }
      return Solution{sol.task, PermSolution{std::move(best)}};
    }
    case TaskKind::Vrp: {
      auto routes = sol.routes().routes;
      for (auto& r : routes) {
        std::vector<int> rev(r.rbegin(), r.rend());
        if (rev < r) r = std::move(rev);
      }
      std::sort(routes.begin(), routes.end());
      return Solution{sol.task, RoutesSolution{std::move(routes)}};
    }
  }
  return sol;
}

namespace detail {

FinalAnswer resolve_final_answer(const ProblemInstance& inst, Session& session,
                                 const std::string& response, const std::string& prompt_context,
                                 int max_repairs, std::vector<std::string>& events) {
  FinalAnswer out;
  ParseResult parsed = parse_answer(response, inst);
  int repairs = 0;
  while (!parsed.solution && repairs < max_repairs) {
    repairs += 1;
    events.push_back("repair:" + std::to_string(repairs));
    GenRequest req;
    req.tag = "repair";
    req.messages.push_back(
        {Role::User, prompt_context + "\n" + std::string(kRepairMarker) + " " + parsed.error +
                         "; reply with only the SOLUTION line."});
    parsed = parse_answer(session.generate(std::move(req)), inst);
  }
  out.repair_calls = repairs;
  if (parsed.solution) {
    out.solution = *parsed.solution;
  } else {
    out.solution = canonical_fallback(inst);
    out.invalid = true;
  }
  return out;
}

}  // namespace detail

namespace {

struct VoteEntry {
  int count = 0;
  Solution representative;
  double cost = 0;
  std::string key;
};

StrategyOutcome run_sampling(const ProblemInstance& inst, Backend& backend, int n_samples,
                             bool cot) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  const PromptBundle bundle = make_prompt_bundle(inst);
  std::string prompt = bundle.problem_text;
  if (cot) prompt += std::string(kCotTrigger) + "\n";
  prompt += bundle.answer_format_contract;

  Session session(backend);
  std::map<std::string, VoteEntry> votes;
  for (int s = 0; s < n_samples; ++s) {
    GenRequest req;
    req.tag = cot ? "cot" : "io";
    req.messages.push_back({Role::User, prompt});
    std::string response;
    try {
      response = session.generate(std::move(req));
    } catch (const BackendError& e) {
      throw StrategyError(e.what(), session.take_transcript());
    }
    ParseResult parsed = parse_answer(response, inst);
    if (!parsed.solution) continue;
    Solution canon = canonicalize(inst, *parsed.solution);
    const std::string key = encode_solution(canon);
    auto [it, inserted] = votes.try_emplace(key);
    it->second.count += 1;
    if (inserted) {
      it->second.cost = benchmark_cost(inst, canon).value;
      it->second.representative = std::move(canon);
      it->second.key = key;
    }
  }

  StrategyOutcome outcome;
  outcome.calls = session.calls();
  outcome.predicted_calls = n_samples;
  if (votes.empty()) {
    outcome.solution = canonical_fallback(inst);
    outcome.invalid = true;
  } else {
    const Sense sense = task_sense(inst.task);
    const VoteEntry* best = nullptr;
    for (const auto& [key, entry] : votes) {
      if (!best || entry.count > best->count ||
          (entry.count == best->count && cost_better(entry.cost, best->cost, sense)) ||
          (entry.count == best->count && entry.cost == best->cost && entry.key < best->key)) {
        best = &entry;
      }
    }
    outcome.solution = best->representative;
  }
  outcome.cost = benchmark_cost(inst, outcome.solution);
  outcome.transcript = session.take_transcript();
  return outcome;
}

}  // namespace

StrategyOutcome run_io(const ProblemInstance& inst, Backend& backend, int n_samples) {
  return run_sampling(inst, backend, n_samples, false);
}

StrategyOutcome run_cot(const ProblemInstance& inst, Backend& backend, int n_samples) {
  return run_sampling(inst, backend, n_samples, true);
}

namespace {

StrategyOutcome run_refine_impl_inner(const ProblemInstance& inst, Session& session, int rounds,
                                      bool trailing_feedback) {
  const std::string prompt = render_problem(inst);
  StrategyOutcome outcome;

  GenRequest initial;
  initial.tag = "refine:initial";
  initial.messages.push_back({Role::User, prompt});
  ParseResult parsed = parse_answer(session.generate(std::move(initial)), inst);

  bool have_best = false;
  Solution best;
  double best_cost = 0;
  std::string current_encoding;
  const Sense sense = task_sense(inst.task);
  auto consider = [&](const Solution& s) {
    const double c = benchmark_cost(inst, s).value;
    if (!have_best || cost_better(c, best_cost, sense)) {
      have_best = true;
      best = s;
      best_cost = c;
    }
  };
  if (parsed.solution) {
    consider(*parsed.solution);
    current_encoding = encode_solution(*parsed.solution);
  } else {
    current_encoding = encode_solution(canonical_fallback(inst));
  }

  for (int r = 0; r < rounds; ++r) {
    GenRequest fb_req;
    fb_req.tag = "refine:feedback";
    fb_req.messages.push_back({Role::User, prompt + "\nProposed solution:\nSOLUTION: " +
                                               current_encoding + "\n" + meta::kFeedback});
    const std::string feedback = session.generate(std::move(fb_req));

    GenRequest refine_req;
    refine_req.tag = "refine:refine";
    refine_req.messages.push_back({Role::User, prompt + "\nCurrent solution:\nSOLUTION: " +
                                                   current_encoding + "\nFeedback:\n" + feedback +
                                                   "\nProvide an improved solution."});
    ParseResult refined = parse_answer(session.generate(std::move(refine_req)), inst);
    if (refined.solution) {
      consider(*refined.solution);
      current_encoding = encode_solution(*refined.solution);
    }
  }
  if (trailing_feedback) {
    GenRequest fb_req;
    fb_req.tag = "refine:feedback";
    fb_req.messages.push_back({Role::User, prompt + "\nProposed solution:\nSOLUTION: " +
                                               current_encoding + "\n" + meta::kFeedback});
    session.generate(std::move(fb_req));
    outcome.events.push_back("budget-tail-feedback");
  }

  if (have_best) {
    outcome.solution = std::move(best);
  } else {
    outcome.solution = canonical_fallback(inst);
    outcome.invalid = true;
  }
  outcome.cost = benchmark_cost(inst, outcome.solution);
  outcome.calls = session.calls();
  outcome.predicted_calls = 1 + 2 * rounds + (trailing_feedback ? 1 : 0);
  outcome.transcript = session.take_transcript();
  return outcome;
}

StrategyOutcome run_refine_impl(const ProblemInstance& inst, Backend& backend, int rounds,
                                bool trailing_feedback) {
  if (rounds < 0) throw std::invalid_argument("rounds must be >= 0");
  Session session(backend);
  try {
    return run_refine_impl_inner(inst, session, rounds, trailing_feedback);
  } catch (const BackendError& e) {
    throw StrategyError(e.what(), session.take_transcript());
  }
}

}  // namespace

StrategyOutcome run_refine(const ProblemInstance& inst, Backend& backend, int rounds) {
  return run_refine_impl(inst, backend, rounds, false);
}

StrategyOutcome run_refine_budget(const ProblemInstance& inst, Backend& backend,
                                  int call_budget) {
  if (call_budget < 1) throw std::invalid_argument("call budget must be >= 1");
  const int rounds = (call_budget - 1) / 2;
  const bool tail = (call_budget - 1) % 2 != 0;
  return run_refine_impl(inst, backend, rounds, tail);
}

namespace {

StrategyOutcome run_decomp_inner(const ProblemInstance& inst, Session& session, int max_steps) {
  const std::string prompt = render_problem(inst);
  StrategyOutcome outcome;

  GenRequest decomp_req;
  decomp_req.tag = "decomp";
  decomp_req.messages.push_back({Role::User, prompt + "\n" + meta::kDecompose});
  const std::string decomp_response = session.generate(std::move(decomp_req));

  const std::size_t raw_steps = split_lines(decomp_response, -1).size();
  std::vector<std::string> steps = split_lines(decomp_response, max_steps);
  if (raw_steps > steps.size()) outcome.events.push_back("truncation:decomp-steps");

  if (steps.empty()) {
    outcome.events.push_back("degenerate:zero-steps");
    GenRequest direct;
    direct.tag = "answer";
    direct.messages.push_back({Role::User, prompt});
    const std::string response = session.generate(std::move(direct));
    detail::FinalAnswer final_answer =
        detail::resolve_final_answer(inst, session, response, prompt, 0, outcome.events);
    outcome.solution = std::move(final_answer.solution);
    outcome.invalid = final_answer.invalid;
    outcome.predicted_calls = 2;
  } else {
    std::string last_thought;
    std::vector<std::string> thoughts;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      GenRequest step_req;
      step_req.tag = "step";
      std::string content = prompt;
      if (!last_thought.empty()) content += "\nPrevious findings:\n" + last_thought;
      content += "\nCurrent subtask: " + steps[k];
      step_req.messages.push_back({Role::User, std::move(content)});
      last_thought = session.generate(std::move(step_req));
      thoughts.push_back(last_thought);
    }
    GenRequest integrate_req;
    integrate_req.tag = "integrate";
    std::string content = prompt + "\nFindings:";
    for (std::size_t k = 0; k < thoughts.size(); ++k) {
      content += "\n[Step " + std::to_string(k + 1) + "] " + thoughts[k];
    }
    content += "\n" + std::string(meta::kIntegrate);
    integrate_req.messages.push_back({Role::User, std::move(content)});
    const std::string response = session.generate(std::move(integrate_req));
    detail::FinalAnswer final_answer =
        detail::resolve_final_answer(inst, session, response, prompt, 2, outcome.events);
    outcome.solution = std::move(final_answer.solution);
    outcome.invalid = final_answer.invalid;
    outcome.predicted_calls =
        2 + static_cast<int>(steps.size()) + final_answer.repair_calls;
  }
  outcome.cost = benchmark_cost(inst, outcome.solution);
  outcome.calls = session.calls();
  outcome.transcript = session.take_transcript();
  return outcome;
}

}  // namespace

StrategyOutcome run_decomp(const ProblemInstance& inst, Backend& backend, int max_steps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  Session session(backend);
  try {
    return run_decomp_inner(inst, session, max_steps);
  } catch (const BackendError& e) {
    throw StrategyError(e.what(), session.take_transcript());
  }
}

}  // namespace sgebench
