#pragma once

#include <cstdint>
#include <limits>

namespace corrgame {

// SplitMix64. Small, fast, and good enough for Monte Carlo outcome draws;
// seeded per (master seed, run, substream) so every draw is a pure function
// of those three numbers.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

enum class Substream : std::uint64_t { kAxes = 1, kOutcomes = 2 };

// Independent generator for one run and purpose.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t run,
                            Substream which) {
  SplitMix64 mix(seed);
  std::uint64_t key = mix() ^ (run * 0xd1b54a32d192ed03ULL);
  key ^= static_cast<std::uint64_t>(which) * 0x8cb92ba72f3d8dd7ULL;
  SplitMix64 scramble(key);
  return SplitMix64(scramble());
}

}  // namespace corrgame
