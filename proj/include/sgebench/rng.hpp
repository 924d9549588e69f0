#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace sgebench {

// SplitMix64 finalizer. Bit-exact on every platform, which is what keeps
// generated instances reproducible across machines.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// SplitMix64 stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  // Unbiased integer in [lo, hi], rejection sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t state_;
};

// Stable hash of an ordered word tuple, used to derive child seeds.
std::uint64_t stable_seed(std::initializer_list<std::uint64_t> words);

// Fisher-Yates with the stream above (std::shuffle is not portable).
template <typename T>
void shuffle(std::vector<T>& values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace sgebench
