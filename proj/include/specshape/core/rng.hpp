#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace specshape::core {

// splitmix64 finalizer; bijective on 64-bit words.  Used to spread a base
// seed into well-separated substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Explicitly seeded random stream.  Every stochastic routine in the toolkit
// takes one of these by reference; the same seed reproduces the same draw
// sequence bit for bit.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in {0, ..., n-1}; rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    // Accept draws outside the wrap-around remainder of 2^64 / n.
    const std::uint64_t min =
        (std::numeric_limits<std::uint64_t>::max() - n + 1) % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x < min);
    return x % n;
  }

  // Deterministic, well-separated substream (per trial, per channel, ...).
  RngStream derive(std::uint64_t stream_id) const {
    return RngStream(
        mix64(seed_ ^ mix64(stream_id * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace specshape::core
