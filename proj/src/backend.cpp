#include "sgebench/backend.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <sstream>

namespace sgebench {

const char* role_name(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string Transcript::to_jsonl() const {
  std::ostringstream os;
  for (const auto& entry : entries) {
    nlohmann::ordered_json j;
    j["call_index"] = entry.call_index;
    j["tag"] = entry.request.tag;
    j["timestamp_ms"] = entry.timestamp_ms;
    nlohmann::ordered_json req;
    req["temperature"] = entry.request.temperature;
    req["max_tokens"] = entry.request.max_tokens;
    nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
    for (const auto& m : entry.request.messages) {
      msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
    }
    req["messages"] = std::move(msgs);
    j["request"] = std::move(req);
    j["response"] = entry.response;
    os << j.dump() << "\n";
  }
  return os.str();
}

std::string Session::generate(GenRequest request) {
  if (request.messages.empty()) {
    throw std::invalid_argument("GenRequest must carry at least one message");
  }
  if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
    throw std::invalid_argument("GenRequest temperature must lie in [0,2]");
  }
  std::string response = backend_->complete(request);
  const std::int64_t ts =
      backend_->deterministic()
          ? 0
          : std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count();
  std::lock_guard<std::mutex> lock(mutex_);
  TranscriptEntry entry;
  entry.call_index = static_cast<int>(transcript_.entries.size()) + 1;
  entry.request = std::move(request);
  entry.response = response;
  entry.timestamp_ms = ts;
  transcript_.entries.push_back(std::move(entry));
  return response;
}

int Session::calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return transcript_.total_calls();
}

}  // namespace sgebench
