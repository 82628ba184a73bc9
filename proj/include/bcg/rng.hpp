#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace bcg {

// Deterministic random source. The core generator is mt19937_64 (whose
// output sequence is fixed by the standard); the distributions are
// hand-rolled on top of it so that streams are bit-identical across
// platforms and standard-library implementations. Instance generators
// record kVersion alongside the seed.
class Rng {
 public:
  static constexpr std::string_view kVersion = "mt19937_64/box-muller/v1";

  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller. No caching of the second value, so the
  // stream position is a pure function of the number of calls.
  double normal() {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // Uniform integer in [0, n). Rejection sampling, exact.
  std::int64_t uniform_int(std::int64_t n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t maxv = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = maxv - maxv % un;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return static_cast<std::int64_t>(x % un);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace bcg
