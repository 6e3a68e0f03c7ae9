#pragma once

#include <cmath>
#include <cstdint>

namespace hawkes {

/// Counter-based generator: each output is a bijective 64-bit mix of
/// (key, counter), where the key is derived from (seed, stream, role).
/// Substreams never overlap and draws are independent of scheduling,
/// which gives bitwise-reproducible parallel Monte Carlo.
class CounterRng {
 public:
  CounterRng() = default;
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t role)
      : key_(mix(mix(seed + kGamma) ^ mix(stream + 0xBF58476D1CE4E5B9ull) ^
                 mix(role + 0x94D049BB133111EBull))) {}

  std::uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

  /// Uniform on (0,1), never exactly 0 or 1.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double normal() {
    const double u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
  }

  /// Stateless value at an absolute index, for pure (seed, index) samplers.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t role, std::uint64_t index) {
    CounterRng r(seed, stream, role);
    r.counter_ = index;
    return r.next_u64();
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace hawkes
