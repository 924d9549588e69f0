#include "sgebench/config.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace sgebench {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int to_int(const std::string& key, const std::string& value) {
  try {
    return std::stoi(value);
  } catch (...) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    return std::stod(value);
  } catch (...) {
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    line_no += 1;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "backend.base_url") cfg.backend_base_url = value;
    else if (key == "backend.model") cfg.backend_model = value;
    else if (key == "backend.temperature") cfg.backend_temperature = to_double(key, value);
    else if (key == "sge.n_cap") cfg.sge_n_cap = to_int(key, value);
    else if (key == "sge.k_cap") cfg.sge_k_cap = to_int(key, value);
    else if (key == "sge.depth") cfg.sge_depth = to_int(key, value);
    else if (key == "sge.refine_rounds") cfg.sge_refine_rounds = to_int(key, value);
    else if (key == "run.concurrency") cfg.run_concurrency = to_int(key, value);
    else if (key == "run.rate_limit_per_min") cfg.run_rate_limit_per_min = to_int(key, value);
    else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_echo_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["backend.base_url"] = cfg.backend_base_url;
  j["backend.model"] = cfg.backend_model;
  j["backend.temperature"] = cfg.backend_temperature;
  j["sge.n_cap"] = cfg.sge_n_cap;
  j["sge.k_cap"] = cfg.sge_k_cap;
  j["sge.depth"] = cfg.sge_depth;
  j["sge.refine_rounds"] = cfg.sge_refine_rounds;
  j["run.concurrency"] = cfg.run_concurrency;
  j["run.rate_limit_per_min"] = cfg.run_rate_limit_per_min;
  return j.dump(2);
}

}  // namespace sgebench
