#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace aud {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used only to derive
/// engine seeds, never as the sample generator itself.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/**
 * Deterministic source of variates for one simulation substream.
 *
 * The engine is std::mt19937_64, whose output sequence for a given 64-bit
 * seed is fixed by the C++ standard. A (seed, stream) pair is mapped to the
 * engine seed by
 *
 *     key = splitmix64(seed) ^ splitmix64(splitmix64(stream) + 0xD1B54A32D192ED03)
 *
 * so equal pairs give equal sequences on every conforming toolchain, and
 * distinct stream indices start from well-separated engine states.
 *
 * Uniforms are built from the top 53 bits of each engine output and lie in
 * the open interval (0, 1). No std:: distribution objects are used, because
 * their algorithms are implementation-defined.
 *
 * A stream is single-owner mutable state; give each worker its own index.
 */
class RandomStream {
 public:
  static constexpr std::string_view generator_name =
      "mt19937_64+splitmix64-substreams";

  RandomStream(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream), engine_(derive_key(seed, stream)) {}

  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::uint64_t stream) noexcept {
    return splitmix64(seed) ^
           splitmix64(splitmix64(stream) + 0xD1B54A32D192ED03ULL);
  }

  /// Uniform variate on (0, 1).
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exponential variate with the given rate, by inversion.
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace aud
