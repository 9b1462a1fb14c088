#pragma once

#include <cstdint>
#include <random>

#include "qfree/quaternion.hpp"

namespace qfree {

/// splitmix64 step; used to derive independent per-rep stream seeds from a
/// master seed so that parallel reps are deterministic regardless of
/// scheduling.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= index * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL;
  return splitmix64(s) ^ a;
}

/// Deterministic gaussian stream: mt19937_64 + explicit Box-Muller, so the
/// sequence is fixed by the seed alone (no library-defined distributions).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // [0, 1)
    return double(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Standard complex gaussian with unit total variance.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * 0.7071067811865476, im * 0.7071067811865476};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qfree
