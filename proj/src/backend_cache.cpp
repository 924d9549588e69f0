#include "sgebench/backend_cache.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sgebench {

namespace fs = std::filesystem;

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

nlohmann::ordered_json request_json(const std::string& model, const GenRequest& request) {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["temperature"] = request.temperature;
  j["max_tokens"] = request.max_tokens;
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  j["messages"] = std::move(msgs);
  return j;
}

}  // namespace

std::string CachingBackend::cache_key(const std::string& model, const GenRequest& request) {
  // Canonical form excludes max_tokens and the accounting tag: the response
  // is a function of model, temperature, and messages.
  nlohmann::ordered_json j;
  j["model"] = model;
  j["temperature"] = request.temperature;
  nlohmann::ordered_json msgs = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    msgs.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  j["messages"] = std::move(msgs);
  return sha256_hex(j.dump());
}

CachingBackend::CachingBackend(std::string cache_dir, Backend& upstream, std::string model_label)
    : dir_(std::move(cache_dir)), upstream_(&upstream), model_(std::move(model_label)) {
  fs::create_directories(dir_);
}

std::string CachingBackend::complete(const GenRequest& request) {
  const std::string key = cache_key(model_, request);
  const fs::path path = fs::path(dir_) / (key + ".json");
  if (fs::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto j = nlohmann::json::parse(buf.str());
    hits_ += 1;
    return j.at("response").get<std::string>();
  }
  const std::string response = upstream_->complete(request);
  misses_ += 1;
  nlohmann::ordered_json j;
  j["request"] = request_json(model_, request);
  j["response"] = response;
  j["created_at"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count();
  // Write-then-rename keeps concurrent writers of the same key benign.
  const fs::path tmp = path.string() + ".tmp" +
                       std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
  return response;
}

}  // namespace sgebench
