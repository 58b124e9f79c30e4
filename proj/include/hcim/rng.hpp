#pragma once

#include <cmath>
#include <cstdint>

namespace hcim::rng {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key of an independent sub-stream `index` under `parent`.
constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t index) {
  return mix64(parent ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Counter-based Bernoulli source: the outcome for counter `c` in stream
/// `key` is a pure function of (key, c), so draws can be taken in any order
/// and by any thread.
class BernoulliStream {
 public:
  BernoulliStream(std::uint64_t key, double p)
      : key_(key), threshold_(static_cast<std::uint64_t>(std::ldexp(p, 53))) {}

  bool operator()(std::uint64_t counter) const {
    return (mix64(key_ + mix64(counter)) >> 11) < threshold_;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t threshold_;  // p scaled to 2^53; p == 1 exceeds every 53-bit draw
};

}  // namespace hcim::rng
