#include "banditkit/rng.hpp"

namespace banditkit {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t base_seed, std::uint64_t rep) noexcept {
  return mix64(base_seed + rep * 0xD1B54A32D192ED03ULL);
}

}  // namespace banditkit
