#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mapcs {

/// Seeded 64-bit stream with platform-independent draws (std::mt19937_64
/// output is fixed by the standard; distributions are not, so draws are
/// derived from raw output here).
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  /// Stream for one session, derived from (session_id, seed).
  static SeededRandom for_session(std::string_view session_id, std::uint64_t seed);

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic child seed for a named sub-stream.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

}  // namespace mapcs
