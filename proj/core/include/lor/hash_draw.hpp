#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace lor::rng {

using Digest = std::array<std::uint8_t, 32>;

// SHA-256 of a byte span.
Digest sha256(std::span<const std::uint8_t> bytes);
Digest sha256(std::string_view text);

// Deterministic draw stream: a 256-bit seed plus a 64-bit block counter.
// Block b is SHA-256(seed || b) and serves four 64-bit words; identical
// (seed, counter) always yields identical output. Values are value types;
// copying a stream replays it.
class HashDraw {
 public:
  HashDraw() = default;

  static HashDraw from_seed(std::uint64_t seed);
  static HashDraw from_bytes(std::span<const std::uint8_t> bytes);
  static HashDraw from_text(std::string_view text);

  // Independent substream derived from the current state and a label.
  HashDraw fork(std::string_view label) const;

  // Substream derived from the current seed and arbitrary content; used
  // where a draw must be a verifiable function of serialized structures.
  HashDraw fold(std::string_view content) const;

  // Uniform integer in [0, range_n); modulo bias removed by rejection.
  // range_n must be >= 1.
  std::uint64_t draw(std::uint64_t range_n);

  // True with probability p (53-bit uniform compare).
  bool bernoulli(double p);

  // Uniform double in [0, 1).
  double uniform01();

  // In-place Fisher-Yates shuffle with this stream.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(draw(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  const Digest& seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  explicit HashDraw(const Digest& seed) : seed_(seed) {}

  HashDraw derive(std::uint8_t tag, std::string_view payload) const;
  std::uint64_t next_word();

  Digest seed_{};
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> cache_{};
  unsigned cache_used_ = 4;  // start empty
};

// Operation-style spelling used throughout the engine.
inline std::uint64_t hash_draw(HashDraw& state, std::uint64_t range_n) {
  return state.draw(range_n);
}

}  // namespace lor::rng
