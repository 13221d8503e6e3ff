#pragma once

#include <cmath>
#include <cstdint>

namespace rck {

// Deterministic splittable random stream. A Substream is keyed by
// (seed, stream id): the same key always yields the same sequence, and
// distinct stream ids give statistically independent sequences. This is a
// splitmix64 counter generator (Stafford mix13 finalizer), chosen over
// <random> engines because its output is fully specified here -- results
// do not depend on the standard library's distribution implementations.
class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix(seed + 0x9e3779b97f4a7c15ULL * mix(stream ^ kStreamSalt))) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // uniform in [0, 1) with 53-bit resolution
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_double();
  }

  // standard normal via Box-Muller; caches the second variate of each pair
  double next_normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  static constexpr std::uint64_t kStreamSalt = 0x6a09e667f3bcc908ULL;

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream-id layout. Solvers, held-out evaluation, and instance parameter
// draws live in disjoint high ranges so that user-facing simulation streams
// (small offsets from zero) never alias internal consumption of the same
// seed.
namespace streams {
inline constexpr std::uint64_t kTrainingBase = 1ULL << 41;
inline constexpr std::uint64_t kHeldOutBase = 1ULL << 42;
inline constexpr std::uint64_t kMomentBase = 1ULL << 43;
inline constexpr std::uint64_t kInstanceParamBase = 0xF1A5'0000'0000'0000ULL;
}  // namespace streams

}  // namespace rck
