#include "lor/hash_draw.hpp"

#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace lor::rng {

namespace {

void put_u64_be(std::uint64_t v, std::uint8_t* out) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
}

std::uint64_t get_u64_be(const std::uint8_t* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

}  // namespace

Digest sha256(std::span<const std::uint8_t> bytes) {
  Digest out;
  SHA256(bytes.data(), bytes.size(), out.data());
  return out;
}

Digest sha256(std::string_view text) {
  return sha256(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

HashDraw HashDraw::from_seed(std::uint64_t seed) {
  std::array<std::uint8_t, 16> material{};
  std::memcpy(material.data(), "lor.root", 8);
  put_u64_be(seed, material.data() + 8);
  return HashDraw(sha256(material));
}

HashDraw HashDraw::from_bytes(std::span<const std::uint8_t> bytes) {
  return HashDraw(sha256(bytes));
}

HashDraw HashDraw::from_text(std::string_view text) {
  return HashDraw(sha256(text));
}

HashDraw HashDraw::fork(std::string_view label) const {
  return derive(0xf0, label);
}

HashDraw HashDraw::fold(std::string_view content) const {
  return derive(0xf1, content);
}

// Seed material is (seed, exact stream position, tag, payload), so streams
// derived at different points never alias.
HashDraw HashDraw::derive(std::uint8_t tag, std::string_view payload) const {
  std::vector<std::uint8_t> material(seed_.begin(), seed_.end());
  material.resize(32 + 8 + 1 + 1 + payload.size());
  put_u64_be(counter_, material.data() + 32);
  material[40] = static_cast<std::uint8_t>(cache_used_);
  material[41] = tag;
  std::memcpy(material.data() + 42, payload.data(), payload.size());
  return HashDraw(sha256(material));
}

std::uint64_t HashDraw::next_word() {
  if (cache_used_ == 4) {
    std::array<std::uint8_t, 40> block;
    std::memcpy(block.data(), seed_.data(), 32);
    put_u64_be(counter_, block.data() + 32);
    const Digest d = sha256(block);
    for (unsigned i = 0; i < 4; ++i) cache_[i] = get_u64_be(d.data() + 8 * i);
    ++counter_;
    cache_used_ = 0;
  }
  return cache_[cache_used_++];
}

std::uint64_t HashDraw::draw(std::uint64_t range_n) {
  if (range_n == 0) throw std::invalid_argument("hash_draw: range_n must be >= 1");
  if (range_n == 1) return 0;
  // Reject the low (2^64 mod n) values so every residue is equally likely.
  const std::uint64_t threshold = (0 - range_n) % range_n;
  std::uint64_t word;
  do {
    word = next_word();
  } while (word < threshold);
  return word % range_n;
}

bool HashDraw::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

double HashDraw::uniform01() {
  return static_cast<double>(next_word() >> 11) * 0x1.0p-53;
}

}  // namespace lor::rng
