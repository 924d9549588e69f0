#pragma once

#include "sgebench/backend.hpp"

#include <memory>
#include <string>

namespace sgebench {

struct LiveBackendConfig {
  std::string base_url = "http://localhost:8000/v1";  // scheme://host[:port][/path]
  std::string model = "gpt-4";
  std::string api_key_env = "SGE_API_KEY";
  int max_retries = 3;
  double timeout_seconds = 120;
  int max_in_flight = 4;
  int rate_limit_per_min = 60;
};

// Chat-completions wire client: POST {base_url}/chat/completions with
// {model, messages, temperature, max_tokens}, bearer token from the
// environment. Bounded retries with exponential backoff; a failure carries
// the attempt count. In-flight and token-bucket limits apply here only.
class LiveBackend final : public Backend {
 public:
  explicit LiveBackend(LiveBackendConfig config);
  ~LiveBackend() override;

  std::string complete(const GenRequest& request) override;
  bool deterministic() const override { return false; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sgebench
