#pragma once

// Deterministic counter-based RNG (splitmix64) with named substreams.
// Every random quantity in the generators is drawn from a stream keyed by
// (seed, tag), so instances are bit-identical across runs and platforms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fal {

class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream_tag)
      : state_(mix(seed ^ fnv1a(stream_tag))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Unbiased integer in [0, bound) via rejection sampling.
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_int: zero bound");
    const std::uint64_t limit = bound * (~0ull / bound);
    std::uint64_t u = next_u64();
    while (u >= limit) u = next_u64();
    return u % bound;
  }

  // `count` distinct indices from {0,...,bound-1}, sorted ascending.
  // Partial Fisher-Yates on an explicit index table.
  std::vector<int> distinct_indices(int count, int bound) {
    if (count < 0 || count > bound)
      throw std::invalid_argument("distinct_indices: count out of range");
    std::vector<int> pool(bound);
    for (int i = 0; i < bound; ++i) pool[i] = i;
    for (int i = 0; i < count; ++i) {
      const int j = i + static_cast<int>(uniform_int(bound - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fal
