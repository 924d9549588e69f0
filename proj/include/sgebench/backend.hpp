#pragma once

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgebench {

enum class Role { System, User, Assistant };

const char* role_name(Role role);

struct ChatMessage {
  Role role = Role::User;
  std::string content;
};

struct GenRequest {
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string tag;  // phase label / trajectory index, for accounting
};

struct TranscriptEntry {
  GenRequest request;
  std::string response;
  int call_index = 0;  // 1-based, strictly increasing
  std::int64_t timestamp_ms = 0;
};

// Ordered call log of one strategy run; the call counter lives here.
struct Transcript {
  std::vector<TranscriptEntry> entries;

  int total_calls() const { return static_cast<int>(entries.size()); }
  std::string to_jsonl() const;  // one call per line
};

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& what, int attempts_made)
      : std::runtime_error(what), attempts(attempts_made) {}
  int attempts = 0;
};

// The generative interface: text in, text out.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const GenRequest& request) = 0;
  virtual bool deterministic() const = 0;
};

// Per-run transcript owner. generate() validates the request, forwards to the
// backend, and appends exactly one entry per invocation (retries inside the
// backend count once). Thread-safe appends.
class Session {
 public:
  explicit Session(Backend& backend) : backend_(&backend) {}

  std::string generate(GenRequest request);

  int calls() const;
  const Transcript& transcript() const { return transcript_; }
  Transcript take_transcript() { return std::move(transcript_); }

 private:
  Backend* backend_;
  Transcript transcript_;
  mutable std::mutex mutex_;
};

}  // namespace sgebench
