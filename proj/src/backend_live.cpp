#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "sgebench/backend_live.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sgebench {

namespace {

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;    // leading path, no trailing slash
};

UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("base_url must carry a scheme: " + url);
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  UrlParts parts;
  if (path_begin == std::string::npos) {
    parts.origin = url;
  } else {
    parts.origin = url.substr(0, path_begin);
    parts.path = url.substr(path_begin);
    while (!parts.path.empty() && parts.path.back() == '/') parts.path.pop_back();
  }
  return parts;
}

// Blocking token bucket, refilled continuously at per-minute rate.
class TokenBucket {
 public:
  TokenBucket(double per_minute)
      : rate_per_sec_(per_minute / 60.0), capacity_(per_minute), tokens_(per_minute),
        last_(std::chrono::steady_clock::now()) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    for (;;) {
      refill();
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const double need = (1.0 - tokens_) / rate_per_sec_;
      lock.unlock();
      std::this_thread::sleep_for(std::chrono::duration<double>(need));
      lock.lock();
    }
  }

 private:
  void refill() {
    const auto now = std::chrono::steady_clock::now();
    tokens_ += std::chrono::duration<double>(now - last_).count() * rate_per_sec_;
    if (tokens_ > capacity_) tokens_ = capacity_;
    last_ = now;
  }

  std::mutex mutex_;
  double rate_per_sec_;
  double capacity_;
  double tokens_;
  std::chrono::steady_clock::time_point last_;
};

class InFlightLimiter {
 public:
  explicit InFlightLimiter(int limit) : limit_(limit) {}

  void enter() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [&] { return active_ < limit_; });
    active_ += 1;
  }
  void leave() {
    std::lock_guard<std::mutex> lock(mutex_);
    active_ -= 1;
    cv_.notify_one();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int limit_;
  int active_ = 0;
};

}  // namespace

struct LiveBackend::Impl {
  LiveBackendConfig cfg;
  UrlParts url;
  std::string api_key;
  TokenBucket bucket;
  InFlightLimiter limiter;

  explicit Impl(LiveBackendConfig config)
      : cfg(std::move(config)),
        url(split_url(cfg.base_url)),
        bucket(std::max(1, cfg.rate_limit_per_min)),
        limiter(std::max(1, cfg.max_in_flight)) {
    if (const char* key = std::getenv(cfg.api_key_env.c_str())) api_key = key;
  }
};

LiveBackend::LiveBackend(LiveBackendConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

LiveBackend::~LiveBackend() = default;

std::string LiveBackend::complete(const GenRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = impl_->cfg.model;
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  body["messages"] = std::move(msgs);
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  const std::string payload = body.dump();
  const std::string endpoint = impl_->url.path + "/chat/completions";

  httplib::Headers headers;
  if (!impl_->api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->api_key);
  }

  std::string last_error;
  const int attempts_allowed = impl_->cfg.max_retries + 1;
  impl_->limiter.enter();
  struct Leave {
    InFlightLimiter& l;
    ~Leave() { l.leave(); }
  } leave{impl_->limiter};

  for (int attempt = 1; attempt <= attempts_allowed; ++attempt) {
    impl_->bucket.acquire();
    httplib::Client client(impl_->url.origin);
    client.set_connection_timeout(std::chrono::duration<double>(impl_->cfg.timeout_seconds));
    client.set_read_timeout(std::chrono::duration<double>(impl_->cfg.timeout_seconds));
    client.set_write_timeout(std::chrono::duration<double>(impl_->cfg.timeout_seconds));

    auto res = client.Post(endpoint, headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "retryable status " + std::to_string(res->status);
    } else if (res->status != 200) {
      throw BackendError("chat completion failed with status " + std::to_string(res->status) +
                             ": " + res->body,
                         attempt);
    } else {
      try {
        const auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
      } catch (const std::exception& e) {
        throw BackendError(std::string("malformed chat completion response: ") + e.what(),
                           attempt);
      }
    }
    if (attempt < attempts_allowed) {
      std::this_thread::sleep_for(std::chrono::duration<double>(0.25 * (1 << (attempt - 1))));
    }
  }
  throw BackendError("chat completion failed after " + std::to_string(attempts_allowed) +
                         " attempts: " + last_error,
                     attempts_allowed);
}

}  // namespace sgebench
