#include "sgebench/rng.hpp"

#include <stdexcept>

namespace sgebench {

std::int64_t SplitMix64::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
  const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
  if (range == 0) return lo + static_cast<std::int64_t>((*this)());
  // Reject the biased low region so every residue is equally likely.
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x >= threshold) return lo + static_cast<std::int64_t>(x % range);
  }
}

std::uint64_t stable_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = 0xA0761D6478BD642FULL;
  for (std::uint64_t w : words) {
    h ^= w;
    h = mix64(h + 0x9E3779B97F4A7C15ULL);
  }
  return h;
}

}  // namespace sgebench
