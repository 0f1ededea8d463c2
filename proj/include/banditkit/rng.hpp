#pragma once

#include <cstdint>

namespace banditkit {

/// SplitMix64 generator (Steele, Lea & Flood 2014).
///
/// State is a single 64-bit word. Each call adds the golden-ratio increment
/// 0x9E3779B97F4A7C15 and returns the mixed state:
///
///     z = state += 0x9E3779B97F4A7C15
///     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///     return z ^ (z >> 31)
///
/// uniform() takes the top 53 bits: (next() >> 11) * 2^-53, a value in [0,1).
/// uniform_index(m) is the high word of the 128-bit product next() * m.
/// Any implementation following these three rules reproduces our streams.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t uniform_index(std::uint64_t m) noexcept {
    __extension__ using Wide = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<Wide>(next()) * m) >> 64);
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// The SplitMix64 output function on its own; a bijection of 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of replication `rep` under `base_seed`:
/// mix64(base_seed + rep * 0xD1B54A32D192ED03). The multiplier is odd, so for a
/// fixed base distinct reps (mod 2^64) give distinct seeds.
std::uint64_t derive(std::uint64_t base_seed, std::uint64_t rep) noexcept;

}  // namespace banditkit
