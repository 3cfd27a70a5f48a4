#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace divmax {

/// Seeded generator used everywhere randomness is needed. All mappings from
/// raw 64-bit draws to doubles/ranges are spelled out here instead of relying
/// on std distributions, so that a given seed produces the same stream of
/// values on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1}; n must be positive. Modulo bias is irrelevant
  /// at the n we use and keeps the mapping trivially portable.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  /// Fisher-Yates with explicit draws.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Stateless 64-bit mix, used where a fixed pseudo-random hash of an integer
/// is needed (e.g. the projection key for adversarial partitioning).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace divmax
