#pragma once

#include "sgebench/backend.hpp"

#include <string>

namespace sgebench {

// Append-only on-disk request/response store keyed by a 256-bit hash of
// (model, temperature, canonicalized messages). One file per key; a recorded
// live run replays in full without touching the network.
class CachingBackend final : public Backend {
 public:
  CachingBackend(std::string cache_dir, Backend& upstream, std::string model_label);

  std::string complete(const GenRequest& request) override;
  bool deterministic() const override { return upstream_->deterministic(); }

  // Hits/misses observed by this wrapper instance.
  int hits() const { return hits_; }
  int misses() const { return misses_; }

  static std::string cache_key(const std::string& model, const GenRequest& request);

 private:
  std::string dir_;
  Backend* upstream_;
  std::string model_;
  int hits_ = 0;
  int misses_ = 0;
};

}  // namespace sgebench
