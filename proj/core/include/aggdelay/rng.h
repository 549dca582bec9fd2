#ifndef AGGDELAY_RNG_H_
#define AGGDELAY_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace aggdelay {

// SplitMix64 finalizer; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Substream : std::uint64_t {
  kArrivals = 1,
  kPayloads = 2,
  kBackoffs = 3,
};

// mt19937_64 stream keyed by (seed, substream). Draw helpers avoid the
// implementation-defined std distributions so output is portable.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, Substream which)
      : engine_(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(which)))) {}

  // Uniform on (0, 1].
  double uniform_open0() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on {0, ..., bound}, unbiased.
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t range = bound + 1;
    if (range == 0) return engine_();
    const std::uint64_t limit = (~std::uint64_t{0} / range) * range;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % range;
  }

  double exponential(double mean) { return -mean * std::log(uniform_open0()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aggdelay

#endif  // AGGDELAY_RNG_H_
