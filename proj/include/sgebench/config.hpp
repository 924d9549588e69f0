#pragma once

#include <stdexcept>
#include <string>

namespace sgebench {

// Flat key = value configuration ('#' and ';' comments). Documented keys:
//   backend.base_url, backend.model, backend.temperature,
//   sge.n_cap, sge.k_cap, sge.depth, sge.refine_rounds,
//   run.concurrency, run.rate_limit_per_min
struct RunConfig {
  std::string backend_base_url = "http://localhost:8000/v1";
  std::string backend_model = "gpt-4";
  double backend_temperature = 0.7;  // live default; scripted runs pin 0
  int sge_n_cap = 4;
  int sge_k_cap = 10;
  int sge_depth = 2;
  int sge_refine_rounds = 1;
  int run_concurrency = 4;
  int run_rate_limit_per_min = 60;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// The effective configuration echoed into every run artifact.
std::string config_echo_json(const RunConfig& config);

}  // namespace sgebench
