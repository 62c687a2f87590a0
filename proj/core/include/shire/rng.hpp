#pragma once

#include <cstdint>
#include <string_view>

namespace shire {

// splitmix64 finalizer; also used as the keyed-hash mixing step.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s);

// Deterministic per-entity random stream: the same (seed, stream_id) gives
// the same draw sequence on every platform, and adding a stream never
// perturbs the draws of another.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view stream_id);

  std::uint64_t next_u64();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  std::uint64_t below(std::uint64_t n);  // [0, n), n > 0

 private:
  std::uint64_t state_;
};

}  // namespace shire
