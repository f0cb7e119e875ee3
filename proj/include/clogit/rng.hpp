#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace clogit {

// Seedable generator with numbered streams. All derived values (uniform,
// normal, bounded integers) are produced from raw mt19937_64 output by fixed
// arithmetic, so sequences are identical across platforms and standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : gen_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  std::uint64_t next() { return gen_(); }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

  // unbiased uniform integer in [0, bound)
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

  // standard normal via Box-Muller; the sine partner is cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
    const double u2 = static_cast<double>(next() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace clogit
