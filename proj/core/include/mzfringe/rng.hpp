// rng.hpp
// Counter-based seeded generator (splitmix64). Each scan point derives
// its own stream from (seed, point index), so results are independent
// of execution order and thread count.

#pragma once

#include <cstdint>

namespace mzfringe {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~static_cast<result_type>(0); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound); bound > 0.
  int uniform_int(int bound) {
    const auto x = (*this)();
    return static_cast<int>((static_cast<unsigned __int128>(x) *
                             static_cast<unsigned __int128>(bound)) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Sub-seed for scan point `index` under master `seed`.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace mzfringe
