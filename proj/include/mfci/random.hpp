#pragma once

// Counter-based random streams. Draw d of a run seeded with `seed` always
// uses the stream splitmix64(seed, d), so serial, parallel and partial runs
// see identical draws.

#include <cstdint>
#include <string_view>

namespace mfci {

inline constexpr std::string_view kPrngName = "splitmix64-counter/v1";

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  // Stream for draw `counter` of a run seeded with `seed`.
  static SplitMix64 for_draw(std::uint64_t seed, std::uint64_t counter) {
    return SplitMix64(mix(seed ^ mix(counter + 0x632BE59BD9B4E019ULL)));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform integer in [0, bound) by multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace mfci
