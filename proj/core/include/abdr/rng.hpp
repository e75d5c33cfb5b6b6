#pragma once

#include <cstdint>
#include <random>

namespace abdr {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Seedable random stream with cheap, collision-resistant substreams.
///
/// A root seed spawns one independent stream per integer id, so replicates
/// can run in any order (or in parallel) and still produce identical
/// results when gathered by index.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed)
      : key_(seed),
        engine_(detail::splitmix64(detail::splitmix64(seed) ^ 0xA5A5A5A5A5A5A5A5ull)) {}

  /// Derive an independent stream for the given id.
  RngStream substream(std::uint64_t id) const {
    return RngStream(detail::splitmix64(key_ ^ detail::splitmix64(id + 1)));
  }

  std::mt19937_64& engine() { return engine_; }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double normal(double mean, double sd) {
    return std::normal_distribution<double>(mean, sd)(engine_);
  }

  double exponential() {
    return std::exponential_distribution<double>(1.0)(engine_);
  }

  double gamma(double shape) {
    return std::gamma_distribution<double>(shape, 1.0)(engine_);
  }

  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace abdr
